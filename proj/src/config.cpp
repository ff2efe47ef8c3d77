#include "mbfpe/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mbfpe/errors.hpp"

namespace mbfpe {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

struct Section {
    RunConfig cfg;
    int header_line = 0;
    std::map<std::string, int> seen;  // key -> line
};

class Parser {
public:
    explicit Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const { throw ConfigError(source_, line, msg); }

    double number(int line, std::string_view key, std::string_view v) const {
        double out = 0.0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size())
            fail(line, "'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
        return out;
    }

    std::uint64_t count(int line, std::string_view key, std::string_view v) const {
        std::uint64_t out = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size())
            fail(line, "'" + std::string(key) + "' expects a nonnegative integer, got '" + std::string(v) + "'");
        return out;
    }

    void assign(Section& s, int line, const std::string& key, std::string_view v) {
        if (auto it = s.seen.find(key); it != s.seen.end())
            fail(line, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
        s.seen[key] = line;
        RunConfig& c = s.cfg;
        if (key == "class") {
            if (v == "I") c.kind = ClassKind::I;
            else if (v == "II") c.kind = ClassKind::II;
            else if (v == "III") c.kind = ClassKind::III;
            else fail(line, "class must be I, II or III, got '" + std::string(v) + "'");
        } else if (key == "mirrored") {
            if (v == "true") c.mirrored = true;
            else if (v == "false") c.mirrored = false;
            else fail(line, "mirrored must be true or false");
        } else if (key == "alpha") c.alpha = number(line, key, v);
        else if (key == "z1") c.z1 = number(line, key, v);
        else if (key == "z2") c.z2 = number(line, key, v);
        else if (key == "a1") c.a1 = number(line, key, v);
        else if (key == "a2") c.a2 = number(line, key, v);
        else if (key == "beta") c.beta = number(line, key, v);
        else if (key == "times") {
            c.times.clear();
            std::size_t pos = 0;
            while (pos <= v.size()) {
                const auto comma = v.find(',', pos);
                const auto item = trim(v.substr(pos, comma == std::string_view::npos ? v.npos : comma - pos));
                if (item.empty()) fail(line, "empty entry in 'times'");
                c.times.push_back(number(line, key, item));
                if (comma == std::string_view::npos) break;
                pos = comma + 1;
            }
        } else if (key == "output") c.output = std::string(v);
        else if (key == "points") c.points = count(line, key, v);
        else if (key == "cells") c.cells = count(line, key, v);
        else if (key == "paths") c.paths = count(line, key, v);
        else if (key == "bins") c.bins = count(line, key, v);
        else if (key == "steps") c.steps = count(line, key, v);
        else if (key == "seed") c.seed = count(line, key, v);
        else if (key == "log_time_span") c.log_time_span = number(line, key, v);
        else if (key == "ds") c.ds = number(line, key, v);
        else if (key == "norm_tol") c.norm_tol = number(line, key, v);
        else if (key == "identity_tol") c.identity_tol = number(line, key, v);
        else if (key == "pde_l1_tol") c.pde_l1_tol = number(line, key, v);
        else if (key == "sde_l1_tol") c.sde_l1_tol = number(line, key, v);
        else fail(line, "unknown key '" + key + "'");
    }

    void validate(const Section& s) const {
        const RunConfig& c = s.cfg;
        auto line_of = [&](const char* key) {
            auto it = s.seen.find(key);
            return it == s.seen.end() ? s.header_line : it->second;
        };
        auto require = [&](const std::optional<double>& v, const char* key) {
            if (!v) fail(s.header_line, "section [" + c.name + "]: class " + std::string(to_string(c.kind)) +
                                            " requires '" + key + "'");
        };
        auto forbid = [&](const std::optional<double>& v, const char* key) {
            if (v) fail(line_of(key), "'" + std::string(key) + "' does not apply to class " +
                                          std::string(to_string(c.kind)));
        };
        auto check = [&](bool ok, const char* key, const std::string& msg) {
            if (!ok) fail(line_of(key), msg);
        };

        check(std::isfinite(c.alpha) && c.alpha != 0.0, "alpha", "alpha must be finite and nonzero");
        require(c.a1, "a1");
        require(c.a2, "a2");
        check(*c.a1 > 0.0, "a1", "a1 must be positive");
        check(*c.a2 > 0.0, "a2", "a2 must be positive");
        switch (c.kind) {
            case ClassKind::I:
                require(c.z1, "z1");
                require(c.z2, "z2");
                forbid(c.beta, "beta");
                check(*c.z1 < *c.z2, "z2", "class I requires z1 < z2");
                break;
            case ClassKind::II:
                require(c.z2, "z2");
                require(c.beta, "beta");
                forbid(c.z1, "z1");
                check(*c.z2 > 0.0, "z2", "class II requires z2 > 0");
                break;
            case ClassKind::III:
                require(c.z1, "z1");
                require(c.beta, "beta");
                forbid(c.z2, "z2");
                check(*c.z1 >= 0.0, "z1", "class III requires z1 >= 0");
                check(*c.beta > 0.0, "beta", "class III requires beta > 0");
                break;
        }
        if (c.times.empty()) fail(line_of("times"), "section [" + c.name + "]: 'times' is required");
        for (double t : c.times) check(t > 0.0, "times", "all times must be positive");
        check(c.points >= 2, "points", "points must be at least 2");
        check(c.cells >= 8, "cells", "cells must be at least 8");
        check(c.bins >= 10, "bins", "bins must be at least 10");
        check(c.steps >= 1, "steps", "steps must be at least 1");
        check(c.log_time_span > 0.0, "log_time_span", "log_time_span must be positive");
        check(c.ds > 0.0, "ds", "ds must be positive");
        for (const char* k : {"norm_tol", "identity_tol", "pde_l1_tol", "sde_l1_tol"}) {
            const double v = std::string_view(k) == "norm_tol" ? c.norm_tol
                             : std::string_view(k) == "identity_tol" ? c.identity_tol
                             : std::string_view(k) == "pde_l1_tol"   ? c.pde_l1_tol
                                                                     : c.sde_l1_tol;
            check(v > 0.0, k, std::string(k) + " must be positive");
        }
    }

    std::vector<RunConfig> parse(std::string_view text) {
        std::vector<Section> sections;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto nl = text.find('\n', pos);
            std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
            ++line_no;
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(line_no, "malformed section header");
                const auto name = trim(line.substr(1, line.size() - 2));
                if (name.empty()) fail(line_no, "empty section name");
                Section s;
                s.cfg.name = std::string(name);
                s.header_line = line_no;
                sections.push_back(std::move(s));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key.empty()) fail(line_no, "missing key before '='");
            if (value.empty()) fail(line_no, "missing value for '" + std::string(key) + "'");
            if (sections.empty()) {
                Section s;
                s.header_line = line_no;
                sections.push_back(std::move(s));
            }
            assign(sections.back(), line_no, std::string(key), value);
        }
        if (sections.empty()) fail(line_no, "no run sections found");

        std::vector<RunConfig> out;
        for (const Section& s : sections) {
            validate(s);
            out.push_back(s.cfg);
        }
        return out;
    }

private:
    std::string source_;
};

}  // namespace

std::vector<RunConfig> parse_config(std::string_view text, const std::string& source) {
    return Parser(source).parse(text);
}

std::vector<RunConfig> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string format_config(const RunConfig& c) {
    std::ostringstream os;
    os << '[' << c.name << "]\n";
    os << "class = " << to_string(c.kind) << '\n';
    if (c.mirrored) os << "mirrored = true\n";
    os << "alpha = " << format_double(c.alpha) << '\n';
    auto opt = [&](const char* key, const std::optional<double>& v) {
        if (v) os << key << " = " << format_double(*v) << '\n';
    };
    opt("z1", c.z1);
    opt("z2", c.z2);
    opt("a1", c.a1);
    opt("a2", c.a2);
    opt("beta", c.beta);
    os << "times = ";
    for (std::size_t i = 0; i < c.times.size(); ++i) os << (i ? ", " : "") << format_double(c.times[i]);
    os << '\n';
    if (!c.output.empty()) os << "output = " << c.output << '\n';
    os << "points = " << c.points << '\n';
    os << "cells = " << c.cells << '\n';
    os << "paths = " << c.paths << '\n';
    os << "bins = " << c.bins << '\n';
    os << "steps = " << c.steps << '\n';
    os << "seed = " << c.seed << '\n';
    os << "log_time_span = " << format_double(c.log_time_span) << '\n';
    os << "ds = " << format_double(c.ds) << '\n';
    os << "norm_tol = " << format_double(c.norm_tol) << '\n';
    os << "identity_tol = " << format_double(c.identity_tol) << '\n';
    os << "pde_l1_tol = " << format_double(c.pde_l1_tol) << '\n';
    os << "sde_l1_tol = " << format_double(c.sde_l1_tol) << '\n';
    return os.str();
}

SolutionClass to_solution_class(const RunConfig& c) {
    auto need = [&](const std::optional<double>& v, const char* key) {
        if (!v) throw DomainError(std::string("config is missing '") + key + "'");
        return *v;
    };
    switch (c.kind) {
        case ClassKind::I:
            return {ClassI{need(c.z1, "z1"), need(c.z2, "z2"), need(c.a1, "a1"), need(c.a2, "a2")}, false};
        case ClassKind::II:
            return {ClassII{need(c.z2, "z2"), need(c.a1, "a1"), need(c.a2, "a2"), need(c.beta, "beta")},
                    c.mirrored};
        case ClassKind::III:
            return {ClassIII{need(c.z1, "z1"), need(c.a1, "a1"), need(c.a2, "a2"), need(c.beta, "beta")},
                    c.mirrored};
    }
    throw DomainError("unknown class");
}

RunConfig config_from_preset(const FigurePreset& preset) {
    RunConfig c;
    c.name = preset.name;
    c.kind = preset.params.kind();
    c.mirrored = preset.params.mirrored;
    c.alpha = preset.alpha;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            c.a1 = p.a1;
            c.a2 = p.a2;
            if constexpr (std::is_same_v<T, ClassI>) {
                c.z1 = p.z1;
                c.z2 = p.z2;
            } else if constexpr (std::is_same_v<T, ClassII>) {
                c.z2 = p.z2;
                c.beta = p.beta;
            } else {
                c.z1 = p.z1;
                c.beta = p.beta;
            }
        },
        preset.params.params);
    c.times = preset.times;
    return c;
}

}  // namespace mbfpe
