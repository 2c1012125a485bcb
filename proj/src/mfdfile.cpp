#include "helixlab/mfdfile.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace helixlab {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw InputError(source + ":" + std::to_string(line) + ": " + msg);
}

std::string strip(std::string s) {
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& source, int line, const std::string& tok) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        fail(source, line, "expected a number, got '" + tok + "'");
    return v;
}

} // namespace

Immersion parse_manifold_text(const std::string& text, const std::string& source_name) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    std::string name;
    int m = -1, n = -1;
    std::vector<std::pair<std::string, int>> component_lines; // text + line for diagnostics
    std::vector<std::pair<double, double>> domain;
    bool header_seen = false;

    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line != "helixlab-manifold v1")
                fail(source_name, lineno,
                     "expected header 'helixlab-manifold v1', got '" + line + "'");
            header_seen = true;
            continue;
        }

        const auto colon = line.find(':');
        if (colon == std::string::npos)
            fail(source_name, lineno, "expected 'key: value', got '" + line + "'");
        const std::string key = strip(line.substr(0, colon));
        const std::string value = strip(line.substr(colon + 1));

        if (key == "name") {
            name = value;
        } else if (key == "m" || key == "n") {
            const double v = parse_number(source_name, lineno, value);
            if (v < 1 || v != std::floor(v)) fail(source_name, lineno, key + " must be a positive integer");
            (key == "m" ? m : n) = static_cast<int>(v);
        } else if (key == "component") {
            component_lines.emplace_back(value, lineno);
        } else if (key == "domain") {
            std::istringstream pair(value);
            std::string lo, hi, extra;
            if (!(pair >> lo >> hi) || (pair >> extra))
                fail(source_name, lineno, "domain wants exactly two numbers: 'domain: lo hi'");
            const double a = parse_number(source_name, lineno, lo);
            const double b = parse_number(source_name, lineno, hi);
            if (!(a < b)) fail(source_name, lineno, "domain lower bound must be below upper bound");
            domain.emplace_back(a, b);
        } else {
            fail(source_name, lineno, "unknown key '" + key + "'");
        }
    }

    if (!header_seen) fail(source_name, 1, "empty file: missing 'helixlab-manifold v1' header");
    if (m < 0) fail(source_name, lineno, "missing 'm:' line");
    if (n < 0) fail(source_name, lineno, "missing 'n:' line");
    if (static_cast<int>(component_lines.size()) != n)
        fail(source_name, lineno,
             "expected " + std::to_string(n) + " component lines, found " +
                 std::to_string(component_lines.size()));
    if (static_cast<int>(domain.size()) != m)
        fail(source_name, lineno,
             "expected " + std::to_string(m) + " domain lines, found " +
                 std::to_string(domain.size()));

    std::vector<Expr> comps;
    comps.reserve(n);
    for (const auto& [text_line, at] : component_lines) {
        try {
            comps.push_back(parse_expression(text_line, m));
        } catch (const ParseError& e) {
            fail(source_name, at, std::string("bad component expression: ") + e.what());
        }
    }

    Box box;
    box.lo.resize(m);
    box.hi.resize(m);
    for (int i = 0; i < m; ++i) {
        box.lo(i) = domain[i].first;
        box.hi(i) = domain[i].second;
    }

    try {
        return Immersion(name.empty() ? source_name : name, m, n, std::move(comps), std::move(box));
    } catch (const InputError& e) {
        fail(source_name, lineno, e.what());
    }
}

Immersion load_manifold_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifold file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifold_text(buf.str(), path);
}

std::string manifold_to_text(const Immersion& M) {
    std::ostringstream out;
    char buf[40];
    out << "helixlab-manifold v1\n";
    out << "name: " << M.name() << "\n";
    out << "m: " << M.dim() << "\n";
    out << "n: " << M.ambient_dim() << "\n";
    for (const Expr& e : M.components()) out << "component: " << to_string(e) << "\n";
    for (int i = 0; i < M.dim(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", M.domain().lo(i));
        out << "domain: " << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", M.domain().hi(i));
        out << " " << buf << "\n";
    }
    return out.str();
}

} // namespace helixlab
