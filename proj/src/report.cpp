#include "dsb/report.hpp"

#include <fstream>

namespace dsb {

void emit_report(const Report& rep, const std::string& path) {
    // `out` writes out.json + out.txt; `out.json` writes out.json + out.txt
    std::string stem = path;
    const std::string suffix = ".json";
    if (stem.size() > suffix.size() && stem.ends_with(suffix))
        stem.resize(stem.size() - suffix.size());
    {
        std::ofstream js(stem + ".json", std::ios::binary);
        if (!js) throw std::runtime_error("cannot write " + stem + ".json");
        js << rep.json.dump(2) << "\n";
    }
    {
        std::ofstream txt(stem + ".txt", std::ios::binary);
        if (!txt) throw std::runtime_error("cannot write " + stem + ".txt");
        txt << rep.text;
    }
}

}  // namespace dsb
