#pragma once

// Turnstile stream files: optional "# key=value" comment header, then one
// update per line as "i j delta" with 0-based integer indices. The file
// replays to the same matrix in any record order.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specstream/dense_matrix.hpp"

namespace specstream {

struct MatrixUpdate {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::int64_t delta = 0;

    bool operator==(const MatrixUpdate&) const = default;
};

struct StreamFile {
    std::vector<std::pair<std::string, std::string>> header;  // insertion order
    std::vector<MatrixUpdate> updates;
    std::size_t n = 0;  // declared dimension, from header key "n"

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : header)
            if (k == key) return &v;
        return nullptr;
    }
};

inline void write_stream(const StreamFile& f, std::ostream& out) {
    for (const auto& [k, v] : f.header) out << "# " << k << '=' << v << '\n';
    for (const auto& u : f.updates) out << u.row << ' ' << u.col << ' ' << u.delta << '\n';
}

inline void write_stream(const StreamFile& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_stream(f, out);
}

inline StreamFile read_stream(std::istream& in) {
    StreamFile f;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("stream line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            std::size_t eq = body.find('=');
            if (eq == std::string::npos) continue;  // plain comment
            std::string key = body.substr(0, eq);
            std::string val = body.substr(eq + 1);
            auto trim = [](std::string& s) {
                while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
                while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                    s.pop_back();
            };
            trim(key);
            trim(val);
            f.header.push_back({key, val});
            continue;
        }
        std::istringstream ss(line);
        long long i, j, d;
        if (!(ss >> i >> j >> d)) fail("expected 'i j delta'");
        std::string rest;
        if (ss >> rest) fail("trailing tokens after 'i j delta'");
        if (i < 0 || j < 0) fail("negative index");
        f.updates.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), d});
    }
    if (const std::string* nv = f.find("n")) {
        f.n = static_cast<std::size_t>(std::stoull(*nv));
    } else {
        for (const auto& u : f.updates)
            f.n = std::max({f.n, std::size_t(u.row) + 1, std::size_t(u.col) + 1});
    }
    for (std::size_t k = 0; k < f.updates.size(); ++k) {
        if (f.updates[k].row >= f.n || f.updates[k].col >= f.n)
            throw std::runtime_error("stream record " + std::to_string(k) +
                                     ": index outside declared n=" + std::to_string(f.n));
    }
    return f;
}

inline StreamFile read_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_stream(in);
}

inline DenseMatrix materialize(const StreamFile& f, std::size_t max_dim = 4096) {
    if (f.n > max_dim) throw std::invalid_argument("stream too large to materialize");
    DenseMatrix a(f.n, f.n);
    for (const auto& u : f.updates) a.at(u.row, u.col) += static_cast<double>(u.delta);
    return a;
}

}  // namespace specstream
