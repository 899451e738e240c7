#include "nlc/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <openssl/evp.h>
#include <sstream>

#include "nlc/errors.hpp"

namespace nlc {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint64_t to_little(std::uint64_t x) {
    if constexpr (std::endian::native == std::endian::little) return x;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((x >> (8 * i)) & 0xff);
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw ConfigError(fmt::format("cannot read '{}'", p.string()));
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string fmt_double(double x) { return fmt::format("{}", x); }

}  // namespace

std::string snapshot_stem(long step, const std::string& name) { return fmt::format("snap_{:06d}_{}", step, name); }

std::vector<fs::path> write_snapshot_array(const fs::path& dir, long step, const std::string& name,
                                           std::span<const double> data, const SnapshotMeta& meta) {
    const std::string stem = snapshot_stem(step, name);
    const fs::path bin = dir / (stem + ".f64"), side = dir / (stem + ".json");
    {
        std::ofstream f(bin, std::ios::binary);
        if (!f) throw ConfigError(fmt::format("cannot write '{}'", bin.string()));
        for (double x : data) {
            const std::uint64_t u = to_little(std::bit_cast<std::uint64_t>(x));
            f.write(reinterpret_cast<const char*>(&u), sizeof u);
        }
    }
    nlohmann::json j{{"nx", meta.nx},         {"ny", meta.ny},   {"h", meta.h},
                     {"layout", meta.layout}, {"components", meta.components}, {"time", meta.time}};
    std::ofstream(side) << j.dump(2) << "\n";
    return {bin, side};
}

std::vector<double> read_snapshot_array(const fs::path& dir, long step, const std::string& name, SnapshotMeta& meta) {
    const std::string stem = snapshot_stem(step, name);
    const auto j = nlohmann::json::parse(read_file(dir / (stem + ".json")));
    meta.nx = j.at("nx");
    meta.ny = j.at("ny");
    meta.h = j.at("h");
    meta.layout = j.at("layout");
    meta.components = j.at("components");
    meta.time = j.at("time");
    const std::string raw = read_file(dir / (stem + ".f64"));
    std::size_t per = 0;
    if (meta.layout == "center") per = static_cast<std::size_t>(meta.nx) * meta.ny;
    else if (meta.layout == "xface") per = static_cast<std::size_t>(meta.nx + 1) * meta.ny;
    else if (meta.layout == "yface") per = static_cast<std::size_t>(meta.nx) * (meta.ny + 1);
    else throw VerificationError(fmt::format("{}: unknown layout '{}'", stem, meta.layout));
    const std::size_t count = per * meta.components;
    if (raw.size() != count * 8)
        throw VerificationError(fmt::format("{}: {} bytes, expected {}", stem, raw.size(), count * 8));
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::uint64_t u = 0;
        std::memcpy(&u, raw.data() + 8 * k, 8);
        out[k] = std::bit_cast<double>(to_little(u));
    }
    return out;
}

std::vector<fs::path> write_state_snapshot(const fs::path& dir, long step, const FlowState& s) {
    const Grid& g = s.rho.grid();
    SnapshotMeta m{g.nx(), g.ny(), g.h(), "center", 1, s.t};
    std::vector<fs::path> files;
    auto add = [&](const std::vector<fs::path>& p) { files.insert(files.end(), p.begin(), p.end()); };
    add(write_snapshot_array(dir, step, "rho", s.rho.values(), m));
    add(write_snapshot_array(dir, step, "p", s.p.values(), m));
    m.layout = "xface";
    add(write_snapshot_array(dir, step, "ux", s.u.ux_values(), m));
    m.layout = "yface";
    add(write_snapshot_array(dir, step, "uy", s.u.uy_values(), m));
    m.layout = "center";
    m.components = s.d.components();
    std::vector<double> d;
    for (int k = 0; k < s.d.components(); ++k)
        d.insert(d.end(), s.d.component(k).values().begin(), s.d.component(k).values().end());
    add(write_snapshot_array(dir, step, "d", d, m));
    return files;
}

FlowState read_state_snapshot(const fs::path& dir, long step) {
    SnapshotMeta m;
    const std::vector<double> rho = read_snapshot_array(dir, step, "rho", m);
    const Grid g(m.nx, m.ny, m.nx * m.h, m.ny * m.h);
    const double t = m.time;
    FlowState s{t, ScalarField(g), VectorField(g), ScalarField(g), DirectorField(g)};
    s.rho.values() = rho;
    s.p.values() = read_snapshot_array(dir, step, "p", m);
    s.u.ux_values() = read_snapshot_array(dir, step, "ux", m);
    s.u.uy_values() = read_snapshot_array(dir, step, "uy", m);
    const std::vector<double> d = read_snapshot_array(dir, step, "d", m);
    s.d = DirectorField(g, m.components);
    for (int k = 0; k < m.components; ++k)
        std::copy_n(d.begin() + static_cast<std::ptrdiff_t>(k * g.cells()), g.cells(), s.d.component(k).values().begin());
    return s;
}

bool has_state_snapshot(const fs::path& dir, long step) {
    for (const char* n : {"rho", "p", "ux", "uy", "d"})
        if (!fs::exists(dir / (snapshot_stem(step, n) + ".f64"))) return false;
    return true;
}

const std::vector<std::string>& diagnostics_columns() {
    static const std::vector<std::string> cols{
        "step",         "t",          "E",          "visc_dissipation", "director_dissipation", "balance_residual",
        "div_u_L2",     "grad_rho_Lq", "grad_u_L2", "sqrt_rho_ut_L2",   "grad2_d_L2",           "grad3_d_L2",
        "unit_drift",   "min_d_i",    "max_d_i",    "picard_iters",     "picard_last_ratio",    "stokes_iters",
        "serrin_u_partial", "serrin_gradd_partial", "M_quantity"};
    return cols;
}

std::string diagnostics_header() {
    std::string s;
    for (const auto& c : diagnostics_columns()) s += (s.empty() ? "" : ",") + c;
    return s;
}

std::string diagnostics_row(const DiagnosticsRecord& r) {
    const std::vector<std::string> v{fmt::format("{}", r.step),
                                     fmt_double(r.t),
                                     fmt_double(r.energy),
                                     fmt_double(r.visc_dissipation),
                                     fmt_double(r.director_dissipation),
                                     fmt_double(r.balance_residual),
                                     fmt_double(r.div_u_L2),
                                     fmt_double(r.grad_rho_Lq),
                                     fmt_double(r.grad_u_L2),
                                     fmt_double(r.sqrt_rho_ut_L2),
                                     fmt_double(r.grad2_d_L2),
                                     fmt_double(r.grad3_d_L2),
                                     fmt_double(r.unit_drift),
                                     fmt_double(r.min_d_i),
                                     fmt_double(r.max_d_i),
                                     fmt::format("{}", r.picard_iters),
                                     fmt_double(r.picard_last_ratio),
                                     fmt::format("{}", r.stokes_iters),
                                     fmt_double(r.serrin_u_partial),
                                     fmt_double(r.serrin_gradd_partial),
                                     fmt_double(r.M_quantity)};
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
}

std::vector<DiagnosticsRecord> read_diagnostics(const fs::path& csv) {
    std::istringstream in(read_file(csv));
    std::string line;
    if (!std::getline(in, line) || line != diagnostics_header())
        throw VerificationError(fmt::format("'{}' does not start with the diagnostics header", csv.string()));
    std::vector<DiagnosticsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != diagnostics_columns().size())
            throw VerificationError(fmt::format("diagnostics row has {} fields: '{}'", v.size(), line));
        DiagnosticsRecord r;
        r.step = static_cast<long>(v[0]);
        r.t = v[1];
        r.energy = v[2];
        r.visc_dissipation = v[3];
        r.director_dissipation = v[4];
        r.balance_residual = v[5];
        r.div_u_L2 = v[6];
        r.grad_rho_Lq = v[7];
        r.grad_u_L2 = v[8];
        r.sqrt_rho_ut_L2 = v[9];
        r.grad2_d_L2 = v[10];
        r.grad3_d_L2 = v[11];
        r.unit_drift = v[12];
        r.min_d_i = v[13];
        r.max_d_i = v[14];
        r.picard_iters = static_cast<int>(v[15]);
        r.picard_last_ratio = v[16];
        r.stokes_iters = static_cast<int>(v[17]);
        r.serrin_u_partial = v[18];
        r.serrin_gradd_partial = v[19];
        r.M_quantity = v[20];
        out.push_back(r);
    }
    return out;
}

std::string sha256_file(const fs::path& p) {
    const std::string data = read_file(p);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw SolverError("SHA-256 digest failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

void write_manifest(const fs::path& dir, const std::vector<fs::path>& files, bool complete, const std::string& note) {
    nlohmann::json list = nlohmann::json::array();
    std::vector<fs::path> sorted = files;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& f : sorted) {
        if (!fs::exists(f)) continue;
        list.push_back({{"path", fs::relative(f, dir).generic_string()},
                        {"sha256", sha256_file(f)},
                        {"bytes", fs::file_size(f)}});
    }
    nlohmann::json j{{"complete", complete}, {"truncated", !complete}, {"note", note}, {"files", list}};
    std::ofstream(dir / "manifest.json") << j.dump(2) << "\n";
}

fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream f(p);
    if (!f) throw ConfigError(fmt::format("cannot write '{}'", p.string()));
    f << text;
    return p;
}

}  // namespace nlc
