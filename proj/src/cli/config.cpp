#include "ifpt/cli/config.hpp"

#include "ifpt/cli/json_lines.hpp"
#include "ifpt/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ifpt::cli {

using nlohmann::json;

namespace {

struct Context {
    std::filesystem::path source;
    LineIndex lines;
};

// A JSON value plus where it came from, for line-precise messages.
class Node {
public:
    Node(const json& j, std::string pointer, std::string path, const Context& ctx)
        : j_(j), pointer_(std::move(pointer)), path_(std::move(path)), ctx_(ctx) {}

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << ctx_.source.string() << ':' << ctx_.lines.line_of(pointer_) << ": "
           << (path_.empty() ? std::string("(top level)") : path_) << ": " << msg;
        throw InputError(os.str());
    }

    std::string origin() const {
        return ctx_.source.string() + ":" + std::to_string(ctx_.lines.line_of(pointer_));
    }
    const std::string& path() const { return path_; }
    const json& raw() const { return j_; }

    bool has(const std::string& key) const { return j_.contains(key); }

    Node at(const std::string& key) const {
        expect_object();
        if (!j_.contains(key)) fail("missing required key '" + key + "'");
        return child(key);
    }

    std::optional<Node> get(const std::string& key) const {
        expect_object();
        if (!j_.contains(key)) return std::nullopt;
        return child(key);
    }

    Node item(std::size_t i) const {
        return Node(j_[i], pointer_ + "/" + std::to_string(i), path_ + "[" + std::to_string(i) + "]", ctx_);
    }

    std::size_t size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }

    void expect_object() const {
        if (!j_.is_object()) fail("expected an object");
    }

    void allow_only(std::initializer_list<const char*> keys) const {
        expect_object();
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : j_.items()) {
            if (!allowed.count(k)) {
                std::string list;
                for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                child(k).fail("unknown key (allowed: " + list + ")");
            }
        }
    }

    // Reals; "inf", "-inf", "+inf" are accepted as strings.
    double real() const {
        if (j_.is_number()) return j_.get<double>();
        if (j_.is_string()) {
            const auto s = j_.get<std::string>();
            if (s == "inf" || s == "+inf") return kInf;
            if (s == "-inf") return -kInf;
        }
        fail("expected a number");
    }

    double finite_real() const {
        const double x = real();
        if (!std::isfinite(x)) fail("expected a finite number");
        return x;
    }

    double positive() const {
        const double x = finite_real();
        if (!(x > 0.0)) fail("must be positive");
        return x;
    }

    std::uint64_t unsigned_integer() const {
        if (j_.is_number_unsigned()) return j_.get<std::uint64_t>();
        if (j_.is_number_integer()) fail("must be nonnegative");
        fail("expected a nonnegative integer");
    }

    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    std::string tag(const char* key) const { return at(key).string(); }

    double real_or(const std::string& key, double def) const {
        const auto n = get(key);
        return n ? n->real() : def;
    }
    double finite_or(const std::string& key, double def) const {
        const auto n = get(key);
        return n ? n->finite_real() : def;
    }

    std::filesystem::path file_path() const {
        std::filesystem::path p = string();
        if (p.is_relative()) p = ctx_.source.parent_path() / p;
        return p;
    }

    std::vector<double> real_array() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back(item(i).finite_real());
        return out;
    }

private:
    Node child(const std::string& key) const {
        return Node(j_.at(key), pointer_ + "/" + escape_pointer_token(key),
                    path_.empty() ? key : path_ + "." + key, ctx_);
    }

    const json& j_;
    std::string pointer_;
    std::string path_;
    const Context& ctx_;
};

std::vector<double> read_numbers_file(const Node& where, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) where.fail("cannot open '" + path.string() + "'");
    std::vector<double> out;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                const double x = std::stod(tok, &used);
                if (used != tok.size() || !std::isfinite(x)) throw std::invalid_argument(tok);
                out.push_back(x);
            } catch (const std::exception&) {
                throw InputError(path.string() + ":" + std::to_string(lineno) + ": not a finite number: '" +
                                 tok + "'");
            }
        }
    }
    if (out.empty()) where.fail("'" + path.string() + "' contains no samples");
    return out;
}

std::vector<double> samples_of(const Node& n) {
    if (n.has("samples") == n.has("file")) n.fail("give exactly one of 'samples' or 'file'");
    if (n.has("samples")) return n.at("samples").real_array();
    return read_numbers_file(n, n.at("file").file_path());
}

levy::Side parse_side(const Node& n) {
    const auto s = n.string();
    if (s == "positive" || s == "+") return levy::Side::positive;
    if (s == "negative" || s == "-") return levy::Side::negative;
    n.fail("side must be 'positive' or 'negative'");
}

Coefficient parse_coefficient(const Node& n) {
    if (n.raw().is_number()) return Coefficient(coef::Constant{n.finite_real()});
    const auto type = n.tag("type");
    if (type == "constant") {
        n.allow_only({"type", "value"});
        return Coefficient(coef::Constant{n.at("value").finite_real()});
    }
    if (type == "linear") {
        n.allow_only({"type", "a", "b"});
        return Coefficient(coef::Linear{n.finite_or("a", 0.0), n.finite_or("b", 0.0)});
    }
    if (type == "ou") {
        n.allow_only({"type", "theta"});
        return Coefficient(coef::Ou{n.at("theta").finite_real()});
    }
    if (type == "bessel_drift") {
        n.allow_only({"type", "delta"});
        return Coefficient(coef::BesselDrift{n.at("delta").finite_real()});
    }
    if (type == "power") {
        n.allow_only({"type", "p", "coeff"});
        return Coefficient(coef::Power{n.at("p").finite_real(), n.finite_or("coeff", 1.0)});
    }
    n.at("type").fail("unknown coefficient type '" + type +
                      "' (expected constant, linear, ou, bessel_drift, power)");
}

levy::Component parse_measure_component(const Node& n) {
    const auto type = n.tag("type");
    if (type == "atoms" || type == "finite_atoms") {
        n.allow_only({"type", "atoms"});
        const Node atoms = n.at("atoms");
        levy::FiniteAtoms out;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const Node a = atoms.item(i);
            if (a.size() != 2) a.fail("expected [jump size, rate]");
            out.atoms.emplace_back(a.item(0).finite_real(), a.item(1).finite_real());
        }
        return out;
    }
    if (type == "one_sided_stable") {
        n.allow_only({"type", "side", "alpha", "intensity", "tempering"});
        return levy::OneSidedStable{parse_side(n.at("side")), n.at("alpha").finite_real(),
                                    n.at("intensity").finite_real(), n.finite_or("tempering", 0.0)};
    }
    if (type == "gamma") {
        n.allow_only({"type", "side", "shape", "rate"});
        return levy::GammaMeasure{parse_side(n.at("side")), n.at("shape").finite_real(),
                                  n.at("rate").finite_real()};
    }
    n.at("type").fail("unknown measure component '" + type +
                      "' (expected atoms, one_sided_stable, gamma)");
}

ProcessModel parse_process(const Node& n) {
    const auto type = n.tag("kind");
    ProcessModel model;
    if (type == "brownian_drift") {
        n.allow_only({"kind", "mu", "vol"});
        model = model::BrownianDrift{n.finite_or("mu", 0.0), n.finite_or("vol", 1.0)};
    } else if (type == "levy") {
        n.allow_only({"kind", "a", "sigma2", "measure", "small_jump_mode", "eta"});
        model::Levy m;
        m.triple.a = n.finite_or("a", 0.0);
        m.triple.sigma2 = n.finite_or("sigma2", 0.0);
        if (const auto meas = n.get("measure")) {
            for (std::size_t i = 0; i < meas->size(); ++i)
                m.triple.measure.components.push_back(parse_measure_component(meas->item(i)));
        }
        if (const auto sj = n.get("small_jump_mode")) {
            const auto s = sj->string();
            if (s == "gaussian")
                m.small_jumps = model::SmallJumpMode::gaussian;
            else if (s == "discard")
                m.small_jumps = model::SmallJumpMode::discard;
            else
                sj->fail("small_jump_mode must be 'gaussian' or 'discard'");
        }
        m.eta = n.finite_or("eta", m.eta);
        model = m;
    } else if (type == "interval_diffusion") {
        n.allow_only({"kind", "beta", "sigma", "lower", "upper", "lower_behavior", "substeps"});
        model::IntervalDiffusion m;
        m.beta = parse_coefficient(n.at("beta"));
        if (const auto s = n.get("sigma")) m.sigma = parse_coefficient(*s);
        m.lower = n.real_or("lower", -kInf);
        m.upper = n.real_or("upper", kInf);
        if (const auto lb = n.get("lower_behavior")) {
            const auto s = lb->string();
            if (s == "unattainable")
                m.lower_behavior = model::LowerBoundary::unattainable;
            else if (s == "reflecting")
                m.lower_behavior = model::LowerBoundary::reflecting;
            else
                lb->fail("lower_behavior must be 'unattainable' or 'reflecting'");
        }
        if (const auto ss = n.get("substeps")) {
            const auto v = ss->unsigned_integer();
            if (v < 1 || v > 1'000'000) ss->fail("substeps must be in [1, 1000000]");
            m.substeps = static_cast<int>(v);
        }
        model = m;
    } else {
        n.at("kind").fail("unknown process type '" + type +
                          "' (expected brownian_drift, levy, interval_diffusion)");
    }
    try {
        validate_model(model);
    } catch (const InputError& e) {
        n.fail(e.what());
    }
    return model;
}

InitialLaw parse_initial(const Node& n) {
    const auto type = n.tag("kind");
    if (type == "point") {
        n.allow_only({"kind", "x"});
        return InitialLaw::point(n.finite_or("x", 0.0));
    }
    if (type == "uniform") {
        n.allow_only({"kind", "a", "b"});
        const double a = n.at("a").finite_real();
        const double b = n.at("b").finite_real();
        if (!(a < b)) n.fail("uniform requires a < b");
        return InitialLaw::uniform(a, b);
    }
    if (type == "normal") {
        n.allow_only({"kind", "mean", "sd"});
        return InitialLaw::normal(n.finite_or("mean", 0.0), n.at("sd").positive());
    }
    if (type == "empirical") {
        n.allow_only({"kind", "samples", "file"});
        return InitialLaw::empirical(samples_of(n));
    }
    n.at("kind").fail("unknown initial law '" + type + "' (expected point, uniform, normal, empirical)");
}

TargetDistribution parse_target_node(const Node& n) {
    const auto type = n.tag("kind");
    if (type == "exponential") {
        n.allow_only({"kind", "rate"});
        return TargetDistribution::exponential(n.at("rate").finite_real());
    }
    if (type == "weibull") {
        n.allow_only({"kind", "shape", "scale"});
        return TargetDistribution::weibull(n.at("shape").finite_real(), n.at("scale").finite_real());
    }
    if (type == "levy_hitting") {
        n.allow_only({"kind", "level"});
        return TargetDistribution::levy_hitting(n.at("level").finite_real());
    }
    if (type == "inverse_gaussian_hitting") {
        n.allow_only({"kind", "level", "drift"});
        return TargetDistribution::inverse_gaussian_hitting(n.at("level").finite_real(),
                                                            n.finite_or("drift", 0.0));
    }
    if (type == "point_mass") {
        n.allow_only({"kind", "time"});
        return TargetDistribution::point_mass(n.at("time").finite_real());
    }
    if (type == "mixture") {
        n.allow_only({"kind", "weights", "components"});
        const auto weights = n.at("weights").real_array();
        const Node comps = n.at("components");
        std::vector<TargetDistribution> parts;
        for (std::size_t i = 0; i < comps.size(); ++i) parts.push_back(parse_target_node(comps.item(i)));
        return TargetDistribution::mixture(weights, std::move(parts));
    }
    if (type == "empirical") {
        n.allow_only({"kind", "samples", "file"});
        return TargetDistribution::empirical(samples_of(n));
    }
    n.at("kind").fail("unknown target type '" + type +
                      "' (expected exponential, weibull, levy_hitting, inverse_gaussian_hitting, "
                      "point_mass, mixture, empirical)");
}

TargetDistribution parse_target(const Node& n) {
    auto t = parse_target_node(n);
    if (const auto problems = validate(t); !problems.empty()) n.fail(problems.front());
    return t;
}

TimeGrid parse_grid(const Node& n) {
    n.allow_only({"t_start", "dt", "steps"});
    const double dt = n.at("dt").positive();
    const double t_start = n.get("t_start") ? n.at("t_start").positive() : dt;
    if (t_start < dt * (1.0 - 1e-12)) n.at("t_start").fail("t_start must be >= dt (grids exclude 0)");
    const auto steps = n.at("steps").unsigned_integer();
    if (steps < 1 || steps > 100'000'000) n.at("steps").fail("steps must be in [1, 1e8]");
    return TimeGrid::arithmetic(t_start, dt, static_cast<std::size_t>(steps));
}

RunConfig parse_run(const Node& n, const Context& ctx, bool top_level) {
    if (top_level)
        n.allow_only({"process", "initial", "target", "grid", "particles", "seed", "output", "verify", "compare"});
    else
        n.allow_only({"process", "initial", "target", "grid", "particles", "seed"});

    RunConfig cfg;
    cfg.source = ctx.source;
    cfg.origin = n.origin();
    cfg.key_prefix = n.path().empty() ? "" : n.path() + ".";
    if (const auto p = n.get("process")) cfg.process = parse_process(*p);
    if (const auto p = n.get("initial")) cfg.initial = parse_initial(*p);
    if (const auto p = n.get("target")) cfg.target = parse_target(*p);
    if (const auto p = n.get("grid")) cfg.grid = parse_grid(*p);
    if (const auto p = n.get("particles")) {
        const auto v = p->unsigned_integer();
        if (v < 2 || v > 0xFFFFFFFFull) p->fail("particles must be in [2, 2^32 - 1]");
        cfg.particles = static_cast<std::size_t>(v);
    }
    if (const auto p = n.get("seed")) cfg.seed = p->unsigned_integer();
    if (!top_level) return cfg;

    if (const auto o = n.get("output")) {
        o->allow_only({"dir"});
        cfg.output_dir = o->at("dir").file_path();
    }
    if (const auto v = n.get("verify")) {
        v->allow_only({"boundary", "paths", "seed", "tolerance"});
        VerifySection vs;
        if (const auto b = v->get("boundary")) vs.boundary = b->file_path();
        if (const auto p = v->get("paths")) {
            const auto k = p->unsigned_integer();
            if (k < 1 || k > 0xFFFFFFFFull) p->fail("paths must be in [1, 2^32 - 1]");
            vs.paths = static_cast<std::size_t>(k);
        }
        if (const auto s = v->get("seed")) vs.seed = s->unsigned_integer();
        if (const auto t = v->get("tolerance")) vs.tolerance = t->positive();
        cfg.verify = vs;
    }
    if (const auto c = n.get("compare")) {
        c->allow_only({"first", "second", "slack"});
        CompareSection cs;
        cs.first = std::make_shared<RunConfig>(parse_run(c->at("first"), ctx, false));
        cs.second = std::make_shared<RunConfig>(parse_run(c->at("second"), ctx, false));
        if (const auto s = c->get("slack")) {
            cs.slack = s->finite_real();
            if (cs.slack < 0.0) s->fail("slack must be nonnegative");
        }
        cfg.compare = cs;
    }
    return cfg;
}

} // namespace

void RunConfig::require(std::initializer_list<const char*> keys) const {
    for (const std::string key : keys) {
        const bool present = (key == "process" && process) || (key == "initial" && initial) ||
                             (key == "target" && target) || (key == "grid" && grid) ||
                             (key == "particles" && particles) || (key == "seed" && seed) ||
                             (key == "compare" && compare) || (key == "verify" && verify);
        if (!present) throw InputError(origin + ": " + key_prefix + key + ": missing required key '" + key + "'");
    }
}

const ProcessModel& RunConfig::process_or_throw() const {
    require({"process"});
    return *process;
}
const TargetDistribution& RunConfig::target_or_throw() const {
    require({"target"});
    return *target;
}
const TimeGrid& RunConfig::grid_or_throw() const {
    require({"grid"});
    return *grid;
}
InitialLaw RunConfig::initial_or_default() const {
    return initial ? *initial : InitialLaw::point(0.0);
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source.string() + ": invalid JSON: " + e.what());
    }
    const Context ctx{source, LineIndex::build(text)};
    return parse_run(Node(doc, "", "", ctx), ctx, true);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace ifpt::cli
