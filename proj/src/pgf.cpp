#include "paralog/pgf.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "pgf payloads are little endian; big endian hosts are unsupported");

namespace paralog {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
    throw std::runtime_error("pgf: " + path + ": " + why);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_pgf(const std::string& path, const GridFunction& f) {
    const GridSpec& s = f.spec();
    if (f.label().find('\n') != std::string::npos)
        throw std::invalid_argument("pgf: label must be a single line");

    std::ofstream out(path, std::ios::binary);
    if (!out) bad(path, "cannot open for writing");

    out << "pgf v1\n";
    out << "n " << s.n << "\n";
    out << "shape";
    for (int v : s.shape) out << ' ' << v;
    out << "\ndomain";
    for (int a = 0; a < s.rank(); ++a)
        out << ' ' << format_double(s.lo[a]) << ' ' << format_double(s.hi[a]);
    out << "\nperiodic " << (s.periodic ? 1 : 0) << "\n";
    out << "label " << f.label() << "\n";
    out << "data\n";
    auto vals = f.values();
    out.write(reinterpret_cast<const char*>(vals.data()),
              static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!out) bad(path, "write failed");
}

GridFunction read_pgf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad(path, "cannot open");

    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) bad(path, std::string("truncated header, expected ") + what);
        return line;
    };

    if (next("version") != "pgf v1") bad(path, "unsupported version line '" + line + "'");

    GridSpec spec;
    {
        std::istringstream ls(next("n"));
        std::string key;
        if (!(ls >> key >> spec.n) || key != "n") bad(path, "malformed n line");
    }
    {
        std::istringstream ls(next("shape"));
        std::string key;
        if (!(ls >> key) || key != "shape") bad(path, "malformed shape line");
        int v;
        while (ls >> v) spec.shape.push_back(v);
        if (static_cast<int>(spec.shape.size()) != spec.n + 1)
            bad(path, "shape entry count does not match n");
    }
    {
        std::istringstream ls(next("domain"));
        std::string key;
        if (!(ls >> key) || key != "domain") bad(path, "malformed domain line");
        double a, b;
        while (ls >> a >> b) {
            spec.lo.push_back(a);
            spec.hi.push_back(b);
        }
        if (static_cast<int>(spec.lo.size()) != spec.n + 1)
            bad(path, "domain endpoint count does not match n");
    }
    {
        std::istringstream ls(next("periodic"));
        std::string key;
        int flag;
        if (!(ls >> key >> flag) || key != "periodic" || (flag != 0 && flag != 1))
            bad(path, "malformed periodic line");
        spec.periodic = flag == 1;
    }
    std::string label;
    {
        next("label");
        if (line.rfind("label ", 0) == 0)
            label = line.substr(6);
        else if (line == "label")
            label = "";
        else
            bad(path, "malformed label line");
    }
    if (next("data") != "data") bad(path, "malformed data line");

    try {
        spec.validate();
    } catch (const std::exception& e) {
        bad(path, std::string("invalid grid: ") + e.what());
    }

    std::vector<double> values(spec.node_count());
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != values.size() * sizeof(double))
        bad(path, "payload shorter than shape product");
    char extra;
    if (in.read(&extra, 1)) bad(path, "payload longer than shape product");

    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            bad(path, "non-finite payload at element " + std::to_string(i));

    return GridFunction(spec, std::move(values), std::move(label));
}

}  // namespace paralog
