#include "nlhyp/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nlhyp {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& text,
                               std::size_t byte, const std::string& what) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << path << ":" << line << ":" << col << ": " << what;
    throw ConfigError(os.str());
}

double num_or(const json& j, const char* key, double dflt) {
    return j.contains(key) ? j.at(key).get<double>() : dflt;
}

} // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(path, text, e.byte, e.what());
    }

    RunConfig c;
    try {
        if (j.contains("grid")) {
            const json& g = j["grid"];
            c.t_min = num_or(g, "t_min", c.t_min);
            c.t_max = num_or(g, "t_max", c.t_max);
            c.x_half_width = num_or(g, "x_half_width", c.x_half_width);
            c.dt = num_or(g, "dt", c.dt);
            c.tau_minus = num_or(g, "tau_minus", c.tau_minus);
            c.tau_plus = num_or(g, "tau_plus", c.tau_plus);
        }
        if (j.contains("operator")) {
            const json& o = j["operator"];
            std::string kind = o.value("kind", "wave");
            if (kind == "wave")
                c.kind = OperatorKind::Wave;
            else if (kind == "dirac")
                c.kind = OperatorKind::Dirac;
            else
                throw ConfigError("operator.kind must be wave or dirac");
            if (o.contains("potential")) {
                const json& p = o["potential"];
                std::string preset = p.value("preset", "free");
                if (preset == "free") {
                    c.potential = PotentialSpec::free();
                } else if (preset == "mass") {
                    c.potential = PotentialSpec::mass_term(num_or(p, "mass", 0.5));
                } else if (preset == "gaussian-potential") {
                    c.potential = PotentialSpec::gaussian(
                        num_or(p, "amp", 1.0), num_or(p, "center_t", 0.0),
                        num_or(p, "center_x", 0.0), num_or(p, "width", 1.0));
                } else {
                    throw ConfigError("unknown potential preset " + preset);
                }
            }
        }
        if (j.contains("kernel")) {
            const json& k = j["kernel"];
            std::string type = k.value("type", "bump");
            if (type == "bump")
                c.kernel_type = KernelType::Bump;
            else if (type == "rank1")
                c.kernel_type = KernelType::RankOne;
            else if (type == "moyal")
                c.kernel_type = KernelType::Moyal;
            else if (type == "local-nc")
                c.kernel_type = KernelType::LocalNC;
            else
                throw ConfigError("unknown kernel type " + type);
            if (k.contains("box")) {
                const json& b = k["box"];
                c.box_t_lo = num_or(b, "t_lo", c.box_t_lo);
                c.box_t_hi = num_or(b, "t_hi", c.box_t_hi);
                c.box_x_lo = num_or(b, "x_lo", c.box_x_lo);
                c.box_x_hi = num_or(b, "x_hi", c.box_x_hi);
            }
            c.modes = static_cast<int>(num_or(k, "modes", c.modes));
            c.amp = num_or(k, "amp", c.amp);
            if (k.contains("symmetric")) c.symmetric = k["symmetric"].get<bool>();
            c.eps = num_or(k, "eps", c.eps);
            c.star.theta0 = num_or(k, "theta0", c.star.theta0);
            c.star.chi_inner = num_or(k, "chi_inner", c.star.chi_inner);
            c.star.chi_outer = num_or(k, "chi_outer", c.star.chi_outer);
            c.star.k_center0 = num_or(k, "k_center_t", 0.0);
            c.star.k_center1 = num_or(k, "k_center_x", 0.0);
            c.star.k_half = num_or(k, "k_half", 1.0);
            if (k.contains("symbol")) {
                const json& s = k["symbol"];
                c.star.symbol.amp = num_or(s, "amp", 1.0);
                c.star.symbol.center0 = num_or(s, "center_t", 0.0);
                c.star.symbol.center1 = num_or(s, "center_x", 0.0);
                c.star.symbol.sigma = num_or(s, "sigma", 0.3);
                c.star.symbol.window_half = num_or(s, "window_half", 0.0);
            }
            c.star.variant = type == "local-nc" ? StarProductSpec::Variant::LocalNC
                                                : StarProductSpec::Variant::Moyal;
        }
        if (j.contains("perturbation")) {
            const json& p = j["perturbation"];
            if (p.contains("lambda")) c.lambda_abs = p["lambda"].get<double>();
            c.lambda_rel = num_or(p, "lambda_rel", c.lambda_rel);
            c.opts.safety = num_or(p, "safety", c.opts.safety);
            c.opts.series_tol = num_or(p, "series_tol", c.opts.series_tol);
            c.opts.residual_tol = num_or(p, "residual_tol", c.opts.residual_tol);
            c.opts.glue_eps_steps =
                static_cast<int>(num_or(p, "glue_eps_steps", c.opts.glue_eps_steps));
        }
        if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return c;
}

void RunConfig::apply_grid_scale(const std::string& scale) {
    if (scale == "medium" || scale.empty()) return;
    if (scale == "small") {
        dt *= 2.0;
        // keep the physical strip and partition widths roughly fixed
        opts.glue_eps_steps = std::max(2, opts.glue_eps_steps / 2);
        strip_steps = std::max(2, strip_steps / 2);
        return;
    }
    throw ConfigError("--grid-scale must be small or medium");
}

GridSpec RunConfig::make_grid() const {
    int n = kind == OperatorKind::Dirac ? 2 : 1;
    return GridSpec(t_min, t_max, x_half_width, dt, n, tau_minus, tau_plus);
}

HyperbolicOperator RunConfig::make_operator(const GridSpec& g) const {
    return kind == OperatorKind::Wave ? HyperbolicOperator::wave(g, potential)
                                      : HyperbolicOperator::dirac(g, potential);
}

NodeBox RunConfig::kernel_box(const GridSpec& g) const {
    auto up = [&](double r) { return static_cast<int>(std::ceil(r - 1e-12)); };
    auto down = [&](double r) { return static_cast<int>(std::floor(r + 1e-12)); };
    return NodeBox{up((box_t_lo - g.t_min) / g.dt), down((box_t_hi - g.t_min) / g.dt),
                   up((box_x_lo + g.x_half_width) / g.dt),
                   down((box_x_hi + g.x_half_width) / g.dt)};
}

KernelOperator RunConfig::make_kernel(const GridSpec& g) const {
    switch (kernel_type) {
        case KernelType::Bump:
            return make_bump_kernel(g, BumpKernelParams{kernel_box(g), modes, seed, symmetric,
                                                        amp});
        case KernelType::RankOne: {
            NodeBox b = kernel_box(g);
            Field w1 = make_bump_field(g, b, seed, false);
            Field w2 = make_bump_field(g, b, seed + 1, false);
            if (symmetric) {
                // <w,f> w is manifestly symmetric
                auto one = KernelOperator::rank_one({{w1, w1}});
                double n = one.norm_estimate(seed + 2);
                return one.scaled(cplx(amp / n, 0.0));
            }
            auto w = KernelOperator::rank_one({{w1, w2}});
            double n = w.norm_estimate(seed + 2);
            return w.scaled(cplx(amp / n, 0.0));
        }
        case KernelType::Moyal:
            return build_moyal_eps(g, star, eps > 0.0 ? eps : 0.1, kernel_box(g));
        case KernelType::LocalNC:
            return build_local_nc(g, star, eps);
    }
    throw std::logic_error("unreachable kernel type");
}

PerturbedSystem RunConfig::make_system(const HyperbolicOperator& op,
                                       const KernelOperator& w) const {
    PerturbedOptions o = opts;
    o.seed = seed;
    PerturbedSystem probe(op, w, cplx(0.0), o);
    double l = lambda_abs ? *lambda_abs : lambda_rel * probe.lambda0();
    return probe.with_lambda(cplx(l, 0.0));
}

void RunConfig::echo(Report& into) const {
    Report& g = into.child("grid");
    g.put("t_min", t_min);
    g.put("t_max", t_max);
    g.put("x_half_width", x_half_width);
    g.put("dt", dt);
    g.put("tau_minus", tau_minus);
    g.put("tau_plus", tau_plus);
    Report& o = into.child("operator");
    o.put("kind", kind == OperatorKind::Wave ? "wave" : "dirac");
    switch (potential.preset) {
        case PotentialSpec::Preset::Free:
            o.put("potential", "free");
            break;
        case PotentialSpec::Preset::Mass:
            o.put("potential", "mass");
            o.put("mass", potential.mass);
            break;
        case PotentialSpec::Preset::GaussianPotential:
            o.put("potential", "gaussian-potential");
            o.put("amp", potential.amp);
            o.put("center_t", potential.center_t);
            o.put("center_x", potential.center_x);
            o.put("width", potential.width);
            break;
    }
    Report& k = into.child("kernel");
    switch (kernel_type) {
        case KernelType::Bump:
            k.put("type", "bump");
            break;
        case KernelType::RankOne:
            k.put("type", "rank1");
            break;
        case KernelType::Moyal:
            k.put("type", "moyal");
            break;
        case KernelType::LocalNC:
            k.put("type", "local-nc");
            break;
    }
    k.put("amp", amp);
    k.put("modes", modes);
    k.put("symmetric", symmetric);
    k.put("eps", eps);
    k.put("theta0", star.theta0);
    Report& p = into.child("perturbation");
    if (lambda_abs) p.put("lambda", *lambda_abs);
    p.put("lambda_rel", lambda_rel);
    p.put("safety", opts.safety);
    p.put("series_tol", opts.series_tol);
    p.put("residual_tol", opts.residual_tol);
    p.put("glue_eps_steps", opts.glue_eps_steps);
    into.put("seed", static_cast<long>(seed));
}

} // namespace nlhyp
