#include "sam/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "sam/error.hpp"

namespace sam {

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::optional<double> try_parse_real(std::string_view tok) {
    if (tok.empty()) return std::nullopt;
    if (tok.front() == '+') tok.remove_prefix(1);
    if (tok.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::vector<std::string> tokenize(std::string_view line) {
    // '=' becomes its own token so `k=v` and `k = v` parse identically.
    std::string spaced;
    spaced.reserve(line.size() + 8);
    for (char c : line) {
        if (c == '=') {
            spaced += " = ";
        } else {
            spaced += c;
        }
    }
    std::vector<std::string> tokens;
    std::istringstream in(spaced);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

struct LineCtx {
    int line;

    [[noreturn]] void fail(ParseErrorKind kind, const std::string& msg) const {
        throw ParseError(kind, line, "line " + std::to_string(line) + ": " + msg);
    }

    double real(const std::string& tok) const {
        if (auto v = try_parse_real(tok)) return *v;
        fail(ParseErrorKind::MalformedNumber, "malformed number '" + tok + "'");
    }
};

/// key=value pairs from tokens[start..]; everything must come in
/// `key = value` triplets.
std::map<std::string, std::string> parse_pairs(const std::vector<std::string>& tokens,
                                               std::size_t start, const LineCtx& ctx) {
    std::map<std::string, std::string> pairs;
    for (std::size_t i = start; i < tokens.size(); i += 3) {
        if (tokens[i] == "=") {
            ctx.fail(ParseErrorKind::MissingArgument, "unexpected '='");
        }
        if (i + 1 >= tokens.size() || tokens[i + 1] != "=") {
            ctx.fail(ParseErrorKind::MissingArgument,
                     "expected '=' after '" + tokens[i] + "'");
        }
        if (i + 2 >= tokens.size() || tokens[i + 2] == "=") {
            ctx.fail(ParseErrorKind::MissingArgument, "missing value for '" + tokens[i] + "'");
        }
        if (!pairs.emplace(tokens[i], tokens[i + 2]).second) {
            ctx.fail(ParseErrorKind::DuplicateStatement, "duplicate key '" + tokens[i] + "'");
        }
    }
    return pairs;
}

class PairSet {
public:
    PairSet(std::map<std::string, std::string> pairs, const LineCtx& ctx)
        : pairs_(std::move(pairs)), ctx_(ctx) {}

    std::optional<std::string> take(const std::string& key) {
        auto it = pairs_.find(key);
        if (it == pairs_.end()) return std::nullopt;
        std::string v = it->second;
        pairs_.erase(it);
        return v;
    }

    std::string require(const std::string& key) {
        if (auto v = take(key)) return *v;
        ctx_.fail(ParseErrorKind::MissingArgument, "missing required '" + key + "='");
    }

    std::optional<double> take_real(const std::string& key) {
        if (auto v = take(key)) return ctx_.real(*v);
        return std::nullopt;
    }

    double require_real(const std::string& key) { return ctx_.real(require(key)); }

    void expect_empty() const {
        if (!pairs_.empty()) {
            ctx_.fail(ParseErrorKind::InvalidValue,
                      "unexpected key '" + pairs_.begin()->first + "'");
        }
    }

private:
    std::map<std::string, std::string> pairs_;
    const LineCtx& ctx_;
};

Distribution parse_distribution(const std::string& kind, double nominal, PairSet& pairs,
                                const LineCtx& ctx) {
    if (kind == "none") {
        return Distribution::fixed(nominal);
    }
    if (kind == "gaussian") {
        const double sigma = pairs.require_real("sigma");
        if (!(sigma > 0.0)) {
            ctx.fail(ParseErrorKind::InvalidValue, "sigma must be > 0");
        }
        return Distribution::gaussian(nominal, sigma);
    }
    if (kind == "uniform") {
        const auto lo = pairs.take_real("lo");
        const auto hi = pairs.take_real("hi");
        const auto halfwidth = pairs.take_real("halfwidth");
        if (halfwidth && (lo || hi)) {
            ctx.fail(ParseErrorKind::InvalidValue, "give either lo=/hi= or halfwidth=, not both");
        }
        if (halfwidth) {
            if (!(*halfwidth > 0.0)) {
                ctx.fail(ParseErrorKind::InvalidValue, "halfwidth must be > 0");
            }
            return Distribution::uniform(nominal - *halfwidth, nominal + *halfwidth);
        }
        if (!lo || !hi) {
            ctx.fail(ParseErrorKind::MissingArgument, "uniform needs lo= and hi= (or halfwidth=)");
        }
        if (!(*lo < *hi)) {
            ctx.fail(ParseErrorKind::InvalidValue, "uniform requires lo < hi");
        }
        return Distribution::uniform(*lo, *hi);
    }
    if (kind == "exponential") {
        const double rate = pairs.require_real("rate");
        if (!(rate > 0.0)) {
            ctx.fail(ParseErrorKind::InvalidValue, "rate must be > 0");
        }
        const double offset = pairs.take_real("offset").value_or(0.0);
        return Distribution::exponential(offset, rate);
    }
    ctx.fail(ParseErrorKind::UnknownDistributionKind, "unknown distribution kind '" + kind + "'");
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

DesignProblem parse(std::string_view text) {
    DesignProblem problem;
    bool have_device = false;
    int device_line = 0;

    struct PendingBind {
        Binding binding;
        int line;
    };
    struct PendingSpec {
        Specification spec;
        int line;
    };
    std::vector<PendingBind> binds;
    std::vector<PendingSpec> spec_lines;
    std::vector<std::pair<std::string, int>> metric_lines;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = (nl == std::string_view::npos)
                                   ? text.substr(pos)
                                   : text.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

        const auto tokens = tokenize(raw);
        if (tokens.empty()) continue;

        const LineCtx ctx{line_no};
        const std::string& kw = tokens[0];

        if (kw == "device") {
            if (have_device) {
                ctx.fail(ParseErrorKind::DuplicateStatement, "duplicate device statement");
            }
            if (tokens.size() < 2 || tokens[1] == "=") {
                ctx.fail(ParseErrorKind::MissingArgument, "device needs a kind");
            }
            PairSet pairs(parse_pairs(tokens, 2, ctx), ctx);
            if (tokens[1] == "cantilever") {
                CantileverModel m;
                if (auto c = pairs.take_real("calib_f")) {
                    if (*c < 0.0) {
                        ctx.fail(ParseErrorKind::InvalidValue, "calib_f must be >= 0");
                    }
                    m.c_f = *c;
                }
                problem.device = m;
            } else if (tokens[1] == "pressure_sensor") {
                problem.device = PressureSensorModel{};
            } else {
                ctx.fail(ParseErrorKind::UnknownDeviceKind,
                         "unknown device kind '" + tokens[1] + "'");
            }
            pairs.expect_empty();
            have_device = true;
            device_line = line_no;
        } else if (kw == "param") {
            if (tokens.size() < 2 || tokens[1] == "=") {
                ctx.fail(ParseErrorKind::MissingArgument, "param needs a name");
            }
            const std::string& name = tokens[1];
            if (!is_identifier(name)) {
                ctx.fail(ParseErrorKind::InvalidValue,
                         "parameter name '" + name + "' is not an identifier");
            }
            for (const auto& p : problem.parameters) {
                if (p.name == name) {
                    ctx.fail(ParseErrorKind::DuplicateParameter,
                             "duplicate parameter '" + name + "'");
                }
            }
            PairSet pairs(parse_pairs(tokens, 2, ctx), ctx);
            const double nominal = pairs.require_real("nominal");
            const std::string dist_kind = pairs.take("dist").value_or("none");
            Distribution dist = [&] {
                try {
                    return parse_distribution(dist_kind, nominal, pairs, ctx);
                } catch (const DomainError& e) {
                    ctx.fail(ParseErrorKind::InvalidValue, e.what());
                }
            }();
            pairs.expect_empty();
            if (!dist.in_support(nominal)) {
                ctx.fail(ParseErrorKind::InvalidValue,
                         "nominal lies outside the distribution support");
            }
            problem.parameters.push_back(StatisticalParameter{name, nominal, dist});
        } else if (kw == "bind") {
            if (tokens.size() != 4 || tokens[2] != "=" || tokens[1] == "=" || tokens[3] == "=") {
                ctx.fail(ParseErrorKind::MissingArgument,
                         "bind syntax: bind <field> = <param|real>");
            }
            Binding b;
            b.field = tokens[1];
            if (auto lit = try_parse_real(tokens[3])) {
                b.literal = *lit;
            } else if (is_identifier(tokens[3])) {
                b.param = tokens[3];
            } else {
                ctx.fail(ParseErrorKind::MalformedNumber,
                         "bind value '" + tokens[3] + "' is neither a parameter nor a number");
            }
            for (const auto& existing : binds) {
                if (existing.binding.field == b.field) {
                    ctx.fail(ParseErrorKind::DuplicateStatement,
                             "device field '" + b.field + "' bound twice");
                }
            }
            binds.push_back(PendingBind{std::move(b), line_no});
        } else if (kw == "metric") {
            if (tokens.size() != 2 || tokens[1] == "=") {
                ctx.fail(ParseErrorKind::MissingArgument, "metric needs exactly one name");
            }
            for (const auto& [m, l] : metric_lines) {
                if (m == tokens[1]) {
                    ctx.fail(ParseErrorKind::DuplicateStatement,
                             "duplicate metric '" + tokens[1] + "'");
                }
            }
            metric_lines.emplace_back(tokens[1], line_no);
        } else if (kw == "spec") {
            if (tokens.size() != 4) {
                ctx.fail(ParseErrorKind::MissingArgument,
                         "spec syntax: spec <metric> <ge|le> <real>");
            }
            Specification s;
            s.metric = tokens[1];
            if (tokens[2] == "ge") {
                s.relation = Relation::GE;
            } else if (tokens[2] == "le") {
                s.relation = Relation::LE;
            } else {
                ctx.fail(ParseErrorKind::InvalidValue,
                         "relation must be 'ge' or 'le', got '" + tokens[2] + "'");
            }
            s.bound = ctx.real(tokens[3]);
            spec_lines.push_back(PendingSpec{std::move(s), line_no});
        } else {
            ctx.fail(ParseErrorKind::UnknownKeyword, "unknown statement keyword '" + kw + "'");
        }
    }

    if (!have_device) {
        throw ParseError(ParseErrorKind::MissingArgument, 1, "line 1: no device statement");
    }

    // Cross-statement validation, each failure pointing at its own line.
    const auto fields = device_field_names(problem.device);
    for (const auto& [b, line] : binds) {
        const LineCtx ctx{line};
        if (std::find(fields.begin(), fields.end(), b.field) == fields.end()) {
            ctx.fail(ParseErrorKind::UnknownField,
                     "device " + std::string(device_kind(problem.device)) + " has no field '" +
                         b.field + "'");
        }
        if (b.param) {
            bool found = false;
            for (const auto& p : problem.parameters) found |= (p.name == *b.param);
            if (!found) {
                ctx.fail(ParseErrorKind::UnknownParameter,
                         "bind references undeclared parameter '" + *b.param + "'");
            }
        }
    }
    const auto supported = device_metric_names(problem.device);
    for (const auto& [m, line] : metric_lines) {
        const LineCtx ctx{line};
        if (std::find(supported.begin(), supported.end(), m) == supported.end()) {
            ctx.fail(ParseErrorKind::UnknownMetric,
                     "metric '" + m + "' is not defined for device " +
                         std::string(device_kind(problem.device)));
        }
        problem.metrics.push_back(m);
    }
    for (const auto& [s, line] : spec_lines) {
        const LineCtx ctx{line};
        if (std::find(problem.metrics.begin(), problem.metrics.end(), s.metric) ==
            problem.metrics.end()) {
            ctx.fail(ParseErrorKind::UnknownMetric,
                     "spec references undeclared metric '" + s.metric + "'");
        }
        problem.specs.push_back(s);
    }

    // Canonical binding order: device field order.
    for (const auto& f : fields) {
        for (auto& [b, line] : binds) {
            if (b.field == f) problem.bindings.push_back(std::move(b));
        }
    }

    try {
        problem.validate();
    } catch (const Error& e) {
        throw ParseError(ParseErrorKind::InvalidValue, 1, std::string("line 1: ") + e.what());
    }
    return problem;
}

std::string serialize(const DesignProblem& problem) {
    problem.validate();
    std::string out;

    if (const auto* c = std::get_if<CantileverModel>(&problem.device)) {
        out += "device cantilever";
        if (c->c_f != 0.0) {
            out += " calib_f=" + format_real(c->c_f);
        }
        out += '\n';
    } else if (std::holds_alternative<PressureSensorModel>(problem.device)) {
        out += "device pressure_sensor\n";
    } else {
        throw UnsupportedOperation("synthetic devices have no netlist form");
    }

    for (const auto& p : problem.parameters) {
        out += "param " + p.name + " nominal=" + format_real(p.nominal) + " dist=";
        switch (p.dist.kind()) {
            case DistKind::Fixed:
                out += "none";
                break;
            case DistKind::Gaussian:
                out += "gaussian sigma=" + format_real(p.dist.sigma());
                break;
            case DistKind::Uniform:
                out += "uniform lo=" + format_real(p.dist.lo()) +
                       " hi=" + format_real(p.dist.hi());
                break;
            case DistKind::Exponential:
                out += "exponential rate=" + format_real(p.dist.rate()) +
                       " offset=" + format_real(p.dist.offset());
                break;
        }
        out += '\n';
    }

    // Bindings in canonical device-field order.
    for (const auto& f : device_field_names(problem.device)) {
        for (const auto& b : problem.bindings) {
            if (b.field != f) continue;
            out += "bind " + b.field + " = ";
            out += b.param ? *b.param : format_real(b.literal);
            out += '\n';
        }
    }

    for (const auto& m : problem.metrics) {
        out += "metric " + m + '\n';
    }
    for (const auto& s : problem.specs) {
        out += "spec " + s.metric + ' ' + to_string(s.relation) + ' ' + format_real(s.bound) +
               '\n';
    }
    return out;
}

}  // namespace sam
