#include "h4free/h3t_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace h4free {

namespace {

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string w; ss >> w;) out.push_back(w);
    return out;
}

std::optional<std::uint64_t> parse_uint(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool parse_sign(const std::string& s, std::size_t line) {
    if (s == "+") return true;
    if (s == "-") return false;
    throw ParseError(line, "expected '+' or '-', got '" + s + "'");
}

} // namespace

H3tDocument parse_h3t(std::istream& in) {
    H3tDocument doc;
    bool have_header = false;
    std::optional<std::size_t> n;
    std::size_t lineno = 0;
    std::vector<std::pair<std::size_t, Literal>> pending; // checked once all vars are known

    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto w = split_words(raw);
        if (w.empty()) continue;

        if (!have_header) {
            if (w.size() != 2 || w[0] != "h3t") throw ParseError(lineno, "expected header 'h3t 1'");
            if (w[1] != "1") throw ParseError(lineno, "unsupported version '" + w[1] + "'");
            have_header = true;
            continue;
        }
        if (w[0] == "points") {
            if (n) throw ParseError(lineno, "duplicate 'points' line");
            if (w.size() != 2) throw ParseError(lineno, "expected 'points <n>'");
            auto v = parse_uint(w[1]);
            if (!v || *v > 4096) throw ParseError(lineno, "bad point count '" + w[1] + "'");
            n = static_cast<std::size_t>(*v);
            doc.structure = PartialHypertournament(*n);
            continue;
        }
        if (!n) throw ParseError(lineno, "'" + w[0] + "' before 'points'");

        if (w[0] == "triple") {
            if (w.size() != 5) throw ParseError(lineno, "expected 'triple <i> <j> <k> <+|->'");
            std::array<PointId, 3> ids{};
            for (int s = 0; s < 3; ++s) {
                auto v = parse_uint(w[1 + s]);
                if (!v) throw ParseError(lineno, "bad point id '" + w[1 + s] + "'");
                if (*v >= *n) throw ParseError(lineno, "point id " + w[1 + s] + " out of range");
                ids[s] = static_cast<PointId>(*v);
            }
            if (!(ids[0] < ids[1] && ids[1] < ids[2])) throw ParseError(lineno, "triple key not sorted");
            const bool plus = parse_sign(w[4], lineno);
            const TripleKey key{ids[0], ids[1], ids[2]};
            if (doc.structure.get(key)) throw ParseError(lineno, "duplicate triple key");
            doc.structure.assign(key, orientation_of(plus));
        } else if (w[0] == "var") {
            if (w.size() != 2) throw ParseError(lineno, "expected 'var <name>'");
            if (parse_uint(w[1])) throw ParseError(lineno, "variable name '" + w[1] + "' is numeric");
            if (doc.constraints.has_var(w[1])) throw ParseError(lineno, "variable '" + w[1] + "' declared twice");
            doc.constraints.declare_var(w[1]);
        } else if (w[0] == "lit") {
            if (w.size() != 5) throw ParseError(lineno, "expected 'lit <t> <t> <t> <+|->'");
            Literal lit;
            for (int s = 0; s < 3; ++s) {
                if (auto v = parse_uint(w[1 + s])) {
                    if (*v >= *n) throw ParseError(lineno, "point id " + w[1 + s] + " out of range");
                    lit.args[s] = Term::point(static_cast<PointId>(*v));
                } else {
                    lit.args[s] = Term::var(w[1 + s]);
                }
            }
            if (lit.args[0] == lit.args[1] || lit.args[1] == lit.args[2] || lit.args[0] == lit.args[2])
                throw ParseError(lineno, "literal repeats an argument");
            lit.sign = orientation_of(parse_sign(w[4], lineno));
            pending.emplace_back(lineno, lit);
        } else {
            throw ParseError(lineno, "unknown directive '" + w[0] + "'");
        }
    }
    if (!have_header) throw ParseError(lineno, "missing header 'h3t 1'");
    if (!n) throw ParseError(lineno, "missing 'points' line");
    for (auto& [line, lit] : pending) {
        for (const auto& t : lit.args)
            if (!t.is_point() && !doc.constraints.has_var(std::get<std::string>(t.ref)))
                throw ParseError(line, "undeclared variable '" + t.str() + "'");
        doc.constraints.add(lit);
    }
    return doc;
}

H3tDocument parse_h3t_string(const std::string& text) {
    std::istringstream in(text);
    return parse_h3t(in);
}

H3tDocument read_h3t_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_h3t(in);
}

Hypertournament read_total_h3t_file(const std::string& path) {
    H3tDocument doc = read_h3t_file(path);
    if (doc.has_constraints()) throw std::invalid_argument(path + ": constraint lines in a structure file; use 'solve'");
    if (!doc.structure.is_total())
        throw std::invalid_argument(path + ": partial structure (" + std::to_string(doc.structure.assigned_count()) +
                                    " of " + std::to_string(triple_count(doc.structure.size())) +
                                    " triples set); complete it with 'solve'");
    return doc.structure.to_total();
}

namespace {

template <typename Get> std::string format_impl(std::size_t n, const std::string& comment, Get get) {
    std::ostringstream out;
    out << "h3t 1\n";
    if (!comment.empty()) {
        std::istringstream lines(comment);
        for (std::string l; std::getline(lines, l);) out << "# " << l << "\n";
    }
    out << "points " << n << "\n";
    for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
            for (PointId k = j + 1; k < n; ++k)
                if (auto o = get(triple_index(i, j, k)))
                    out << "triple " << i << " " << j << " " << k << " " << (*o == Orientation::Plus ? '+' : '-') << "\n";
    return out.str();
}

} // namespace

std::string format_h3t(const Hypertournament& h, const std::string& comment) {
    return format_impl(h.size(), comment, [&](std::size_t t) { return std::optional<Orientation>(h.orient_at(t)); });
}

std::string format_h3t(const PartialHypertournament& h, const std::string& comment) {
    return format_impl(h.size(), comment, [&](std::size_t t) { return h.get_at(t); });
}

void write_h3t_file(const std::string& path, const Hypertournament& h, const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << format_h3t(h, comment);
}

} // namespace h4free
