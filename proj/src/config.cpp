#include "tilepack/config.hpp"

#include "tilepack/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tilepack {

namespace {

template <class T>
void require(bool ok, const char* field, T value, const char* range) {
    if (ok) return;
    std::ostringstream os;
    os << field << "=" << value << " is out of range, expected " << range;
    throw Error("cli-io", "config", os.str());
}

} // namespace

void RunConfig::validate() const {
    require(!rule.empty(), "rule", "''", "a built-in name or a JSON path");
    require(depth >= 0 && depth <= 8, "depth", depth, "[0, 8]");
    require(n_max >= 0 && n_max <= 6, "n_max", n_max, "[0, 6]");
    require(buffer >= 0 && buffer <= 4, "buffer", buffer, "[0, 4]");
    require(root >= -1, "root", root, ">= -1");
    require(hex_depth >= 0 && hex_depth <= 4, "hex_depth", hex_depth, "[0, 4]");
    require(tol > 0.0 && tol < 1.0, "tol", tol, "(0, 1)");
    require(max_iters >= 1, "max_iters", max_iters, ">= 1");
    require(validate_tol > 0.0, "validate_tol", validate_tol, "> 0");
    require(assumption_depth >= 1 && assumption_depth <= 4, "assumption_depth", assumption_depth, "[1, 4]");
}

std::string RunConfig::header() const {
    std::ostringstream os;
    os << "rule=" << rule << "\n";
    if (!host.empty()) os << "host=" << host << "\n";
    os << "depth=" << depth << "\n"
       << "n_max=" << n_max << "\n"
       << "buffer=" << buffer << "\n"
       << "root=" << root << "\n"
       << "hex_depth=" << hex_depth << "\n"
       << "mode=" << to_string(mode) << "\n"
       << "boundary_radii=" << to_string(boundary) << "\n"
       << "solver=" << to_string(solver) << "\n"
       << "tol=" << tol << "\n"
       << "max_iters=" << max_iters << "\n"
       << "sampling=" << sampling << "\n";
    return os.str();
}

int RunConfig::host_type(const SubstitutionRule& r) const {
    if (host.empty()) return 0;
    const int by_label = r.type_of_label(host);
    if (by_label >= 0) return by_label;
    try {
        std::size_t used = 0;
        const int id = std::stoi(host, &used);
        const int t = used == host.size() ? r.type_of_id(id) : -1;
        if (t >= 0) return t;
    } catch (const std::exception&) {
    }
    throw Error("cli-io", "config", "host '" + host + "' is neither a prototile label nor an id of rule " + r.name);
}

ConvergenceParams RunConfig::convergence_params(const SubstitutionRule& r) const {
    ConvergenceParams p;
    p.host = host_type(r);
    p.selector.buffer = buffer;
    p.selector.child = root;
    p.hex_depth = hex_depth;
    p.mode = mode;
    p.boundary = boundary;
    p.tol = tol;
    p.max_iters = max_iters;
    p.solver = solver;
    p.sampling = sampling;
    return p;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cli-io", "write", "cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw Error("cli-io", "write", "failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cli-io", "write", "cannot rename onto " + path);
    }
}

} // namespace tilepack
