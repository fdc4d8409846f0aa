// File formats: CSV and raw binary for sampled data, JSON for matrices,
// filters, scalogram envelopes, and reports.
//
// Signal CSV rows are `t,re,im`; spectrum rows are `omega,re,im`; scalogram
// rows are `b,a,re,im,abs`. Lines starting with '#' carry key=value metadata
// (grid provenance for spectra) and are ignored by generic CSV readers.
// Binary files are little-endian float64 triplets matching the CSV rows.
#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "saftlab/params.hpp"
#include "saftlab/samra.hpp"
#include "saftlab/sawt.hpp"
#include "saftlab/signal.hpp"

namespace saftlab {

using json = nlohmann::json;

namespace detail {

inline std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
    if (!f) throw std::invalid_argument("cannot open for reading: " + path);
    return f;
}

inline std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw std::invalid_argument("cannot open for writing: " + path);
    return f;
}

// parse one CSV row of `n` doubles; returns false on comment/blank lines
inline bool parse_row(const std::string& line, double* out, int n, const std::string& path,
                      std::size_t line_no) {
    if (line.empty() || line[0] == '#') return false;
    std::istringstream ss(line);
    std::string cell;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(ss, cell, ',')) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected " + std::to_string(n) + " columns");
        }
        try {
            out[i] = std::stod(cell);
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": not a number: " + cell);
        }
    }
    return true;
}

// infer t0/dt from the first column and check uniformity
inline void grid_from_column(const std::vector<double>& t, double& t0, double& dt,
                             const std::string& path) {
    if (t.size() < 2) throw std::invalid_argument(path + ": need at least 2 samples");
    t0 = t.front();
    dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0)) throw std::invalid_argument(path + ": grid must be increasing");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(t[i] - (t0 + dt * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(t[i])))
            throw std::invalid_argument(path + ": non-uniform grid near row " +
                                        std::to_string(i + 1));
    }
}

}  // namespace detail

inline json matrix_to_json(const ParameterMatrix& m) {
    return json{{"A", m.A}, {"B", m.B}, {"C", m.C}, {"D", m.D}, {"p", m.p}, {"q", m.q}};
}

inline ParameterMatrix matrix_from_json(const json& j) {
    ParameterMatrix m;
    for (const char* key : {"A", "B", "C", "D", "p", "q"}) {
        if (!j.contains(key))
            throw std::invalid_argument(std::string("matrix JSON missing field: ") + key);
        if (!j.at(key).is_number())
            throw std::invalid_argument(std::string("matrix field not a number: ") + key);
    }
    m.A = j.at("A");
    m.B = j.at("B");
    m.C = j.at("C");
    m.D = j.at("D");
    m.p = j.at("p");
    m.q = j.at("q");
    require_valid(m);
    return m;
}

// ---- time-domain signals --------------------------------------------------

inline void write_signal_csv(const std::string& path, const SampledSignal& s) {
    std::ofstream f = detail::open_out(path);
    f << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i)
        f << s.time(i) << ',' << s.samples[i].real() << ',' << s.samples[i].imag() << '\n';
}

inline SampledSignal read_signal_csv(const std::string& path) {
    std::ifstream f = detail::open_in(path);
    std::vector<double> t;
    std::vector<cd> v;
    std::string line;
    std::size_t line_no = 0;
    double row[3];
    while (std::getline(f, line)) {
        ++line_no;
        if (!detail::parse_row(line, row, 3, path, line_no)) continue;
        t.push_back(row[0]);
        v.emplace_back(row[1], row[2]);
    }
    SampledSignal s;
    detail::grid_from_column(t, s.t0, s.dt, path);
    s.samples = std::move(v);
    s.check();
    return s;
}

inline void write_signal_bin(const std::string& path, const SampledSignal& s) {
    std::ofstream f = detail::open_out(path, true);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double row[3] = {s.time(i), s.samples[i].real(), s.samples[i].imag()};
        f.write(reinterpret_cast<const char*>(row), sizeof(row));
    }
}

inline SampledSignal read_signal_bin(const std::string& path) {
    std::ifstream f = detail::open_in(path, true);
    std::vector<double> t;
    std::vector<cd> v;
    double row[3];
    while (f.read(reinterpret_cast<char*>(row), sizeof(row))) {
        t.push_back(row[0]);
        v.emplace_back(row[1], row[2]);
    }
    if (f.gcount() != 0) throw std::invalid_argument(path + ": truncated triplet record");
    SampledSignal s;
    detail::grid_from_column(t, s.t0, s.dt, path);
    s.samples = std::move(v);
    s.check();
    return s;
}

inline bool has_suffix(const std::string& path, const std::string& suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
}

inline SampledSignal read_signal(const std::string& path) {
    return has_suffix(path, ".bin") ? read_signal_bin(path) : read_signal_csv(path);
}

inline void write_signal(const std::string& path, const SampledSignal& s) {
    if (has_suffix(path, ".bin"))
        write_signal_bin(path, s);
    else
        write_signal_csv(path, s);
}

// ---- spectra ---------------------------------------------------------------

inline void write_spectrum_csv(const std::string& path, const SpectrumSignal& s) {
    std::ofstream f = detail::open_out(path);
    f << std::setprecision(17);
    const json meta = {{"matrix", matrix_to_json(s.matrix)},
                       {"src_t0", s.src_t0},
                       {"src_dt", s.src_dt}};
    f << "# " << meta.dump() << '\n';
    for (std::size_t j = 0; j < s.samples.size(); ++j)
        f << s.omega(j) << ',' << s.samples[j].real() << ',' << s.samples[j].imag() << '\n';
}

inline SpectrumSignal read_spectrum_csv(const std::string& path) {
    std::ifstream f = detail::open_in(path);
    SpectrumSignal s;
    bool have_meta = false;
    std::vector<double> w;
    std::string line;
    std::size_t line_no = 0;
    double row[3];
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') {
            const auto pos = line.find('{');
            if (pos == std::string::npos) continue;
            const json meta = json::parse(line.substr(pos), nullptr, false);
            if (meta.is_discarded())
                throw std::invalid_argument(path + ": malformed metadata header");
            s.matrix = matrix_from_json(meta.at("matrix"));
            s.src_t0 = meta.at("src_t0");
            s.src_dt = meta.at("src_dt");
            have_meta = true;
            continue;
        }
        if (!detail::parse_row(line, row, 3, path, line_no)) continue;
        w.push_back(row[0]);
        s.samples.emplace_back(row[1], row[2]);
    }
    if (!have_meta)
        throw std::invalid_argument(path + ": missing metadata header (matrix, src grid)");
    detail::grid_from_column(w, s.omega0, s.domega, path);
    return s;
}

// ---- filters ---------------------------------------------------------------

inline json coeffs_to_json(const CoeffSeq& c) {
    json arr = json::array();
    for (std::size_t i = 0; i < c.size(); ++i)
        arr.push_back({{"k", c.k_at(i)}, {"re", c.v[i].real()}, {"im", c.v[i].imag()}});
    return arr;
}

inline CoeffSeq coeffs_from_json(const json& arr) {
    if (!arr.is_array() || arr.empty())
        throw std::invalid_argument("filter JSON: coefficient list must be a non-empty array");
    CoeffSeq c;
    c.k0 = arr.front().at("k");
    c.v.resize(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& e = arr[i];
        if (e.at("k").get<int>() != c.k0 + static_cast<int>(i))
            throw std::invalid_argument("filter JSON: k indices must be contiguous");
        c.v[i] = cd(e.at("re").get<double>(), e.at("im").get<double>());
    }
    return c;
}

inline json filter_to_json(const FilterPair& fp) {
    return json{{"matrix", matrix_to_json(fp.matrix)},
                {"c", coeffs_to_json(fp.c)},
                {"d", coeffs_to_json(fp.d)}};
}

inline FilterPair filter_from_json(const json& j) {
    const ParameterMatrix m = matrix_from_json(j.at("matrix"));
    // c determines the pair; d is rebuilt and cross-checked against the file
    const CoeffSeq c = coeffs_from_json(j.at("c"));
    FilterPair fp = make_filter_pair(c, m);
    if (j.contains("d")) {
        const CoeffSeq d = coeffs_from_json(j.at("d"));
        if (d.k0 != fp.d.k0 || d.size() != fp.d.size())
            throw std::invalid_argument("filter JSON: d inconsistent with c");
        for (std::size_t i = 0; i < d.size(); ++i)
            if (std::abs(d.v[i] - fp.d.v[i]) > 1e-9)
                throw std::invalid_argument("filter JSON: d inconsistent with c");
    }
    return fp;
}

// ---- scalograms ------------------------------------------------------------

// CSV rows `b,a,re,im,abs` plus a JSON envelope naming the data file
inline void write_scalogram(const std::string& json_path, const std::string& csv_path,
                            const ScalogramMap& map) {
    {
        std::ofstream f = detail::open_out(csv_path);
        f << std::setprecision(17);
        for (std::size_t i = 0; i < map.nb(); ++i)
            for (std::size_t j = 0; j < map.na(); ++j) {
                const cd v = map.at(i, j);
                f << map.b_grid[i] << ',' << map.a_grid[j] << ',' << v.real() << ','
                  << v.imag() << ',' << std::abs(v) << '\n';
            }
    }
    const json env = {{"matrix", matrix_to_json(map.matrix)},
                      {"b_grid", map.b_grid},
                      {"a_grid", map.a_grid},
                      {"data_ref", csv_path}};
    detail::open_out(json_path) << env.dump(2) << '\n';
}

inline ScalogramMap read_scalogram(const std::string& json_path) {
    json env;
    detail::open_in(json_path) >> env;
    ScalogramMap map;
    map.matrix = matrix_from_json(env.at("matrix"));
    map.b_grid = env.at("b_grid").get<std::vector<double>>();
    map.a_grid = env.at("a_grid").get<std::vector<double>>();
    const std::string csv_path = env.at("data_ref");
    map.coefficients.assign(map.nb() * map.na(), cd{});
    std::ifstream f = detail::open_in(csv_path);
    std::string line;
    std::size_t line_no = 0, idx = 0;
    double row[5];
    while (std::getline(f, line)) {
        ++line_no;
        if (!detail::parse_row(line, row, 5, csv_path, line_no)) continue;
        if (idx >= map.coefficients.size())
            throw std::invalid_argument(csv_path + ": more rows than the envelope grid");
        map.coefficients[idx++] = cd(row[2], row[3]);
    }
    if (idx != map.coefficients.size())
        throw std::invalid_argument(csv_path + ": fewer rows than the envelope grid");
    return map;
}

}  // namespace saftlab
