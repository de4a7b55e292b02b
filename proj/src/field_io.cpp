#include "rdlab/field_io.hpp"

#include "rdlab/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rdlab {
namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Grid parse_grid_header(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line) || line != std::string(what))
        throw ParseError(std::string("field file: missing '") + what + "' header");
    long long dim = 0;
    in >> line >> dim;
    if (line != "dim" || dim < 1 || dim > 3)
        throw ParseError("field file: bad dim line");
    std::vector<GridAxis> axes;
    for (long long a = 0; a < dim; ++a) {
        double length = 0.0;
        long long pts = 0;
        in >> line >> length >> pts;
        if (line != "axis" || !(length > 0.0) || pts < 4)
            throw ParseError("field file: bad axis line");
        axes.push_back(GridAxis{length, static_cast<int>(pts)});
    }
    return Grid(std::move(axes));
}

} // namespace

void write_field_csv(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write field file: " + path);
    out << "rdlab-field-csv 1\n";
    out << "dim " << f.grid().dim() << "\n";
    for (int a = 0; a < f.grid().dim(); ++a)
        out << "axis " << fmt17(f.grid().length(a)) << " " << f.grid().points(a) << "\n";
    out << "values\n";
    for (double v : f.values()) out << fmt17(v) << "\n";
    if (!out) throw IoError("failed writing field file: " + path);
}

Field read_field_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open field file: " + path);
    Grid g = parse_grid_header(in, "rdlab-field-csv 1");
    std::string line;
    in >> line;
    if (line != "values") throw ParseError("field file: missing values section");
    std::vector<double> vals(g.node_count());
    for (double& v : vals)
        if (!(in >> v)) throw ParseError("field file: truncated values");
    return Field(std::move(g), std::move(vals));
}

void write_field_binary(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write field file: " + path);
    const char magic[8] = {'R', 'D', 'L', 'B', 'F', 'L', 'D', '1'};
    out.write(magic, 8);
    const std::uint32_t dim = static_cast<std::uint32_t>(f.grid().dim());
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    for (int a = 0; a < f.grid().dim(); ++a) {
        const double length = f.grid().length(a);
        const std::uint32_t pts = static_cast<std::uint32_t>(f.grid().points(a));
        out.write(reinterpret_cast<const char*>(&length), sizeof(length));
        out.write(reinterpret_cast<const char*>(&pts), sizeof(pts));
    }
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!out) throw IoError("failed writing field file: " + path);
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open field file: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != "RDLBFLD1")
        throw ParseError("field file: bad binary magic");
    std::uint32_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    if (!in || dim < 1 || dim > 3) throw ParseError("field file: bad binary dim");
    std::vector<GridAxis> axes;
    for (std::uint32_t a = 0; a < dim; ++a) {
        double length = 0.0;
        std::uint32_t pts = 0;
        in.read(reinterpret_cast<char*>(&length), sizeof(length));
        in.read(reinterpret_cast<char*>(&pts), sizeof(pts));
        if (!in || !(length > 0.0) || pts < 4)
            throw ParseError("field file: bad binary axis");
        axes.push_back(GridAxis{length, static_cast<int>(pts)});
    }
    Grid g(std::move(axes));
    std::vector<double> vals(g.node_count());
    in.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!in) throw ParseError("field file: truncated binary values");
    return Field(std::move(g), std::move(vals));
}

} // namespace rdlab
