// amo — command-line surface for the almost Mathieu toolkit.
//
// Commands: bands, butterfly, ids, lyapunov, potential-field, level-curve,
//           hdelta-cloud, localize, gaps, verify.
// CSV data and JSON reports, bit-exact (shortest round-trip decimals),
// written atomically via temp-file rename.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <amo/errors.hpp>
#include <amo/nonhermitian.hpp>
#include <amo/operator_model.hpp>
#include <amo/potential.hpp>
#include <amo/rational.hpp>
#include <amo/spectra.hpp>
#include <amo/transfer.hpp>
#include <amo/verify.hpp>
#include <amo/version.hpp>

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

std::string num(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

struct AlphaSpec {
    std::string text;  // as given: "p/q", preset name, or decimal
    amo::Alpha alpha;

    // Rational view: exact when given as p/q; otherwise the deepest continued-
    // fraction convergent with denominator <= qcap.
    amo::Rational rational(std::int64_t qcap) const {
        if (alpha.is_rational()) return *alpha.rat;
        double x = alpha.val - std::floor(alpha.val);
        auto cs = amo::convergents(amo::cf_expand(x, 40));
        const amo::Rational* best = nullptr;
        for (const auto& c : cs)
            if (c.q <= qcap) best = &c;
        if (!best) throw amo::domain_error("no convergent with denominator <= qcap");
        return *best;
    }
};

AlphaSpec parse_alpha(const std::string& s) {
    AlphaSpec spec;
    spec.text = s;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t p = 0, q = 0;
        auto r1 = std::from_chars(s.data(), s.data() + slash, p);
        auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), q);
        if (r1.ec != std::errc() || r2.ec != std::errc() || r2.ptr != s.data() + s.size())
            throw amo::domain_error("alpha: malformed rational '" + s + "'");
        spec.alpha = amo::Alpha(amo::Rational(p, q));
        return spec;
    }
    if (s == "golden" || s == "liouville4") {
        spec.alpha = amo::Alpha(amo::preset_alpha(s));
        return spec;
    }
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw amo::domain_error("alpha: cannot parse '" + s + "'");
    spec.alpha = amo::Alpha(v);
    return spec;
}

struct GridSpec {
    int nx = 0, ny = 0;
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    std::istringstream in(s);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() != 6) throw amo::domain_error("grid: expected nx:ny:xmin:xmax:ymin:ymax");
    try {
        g.nx = std::stoi(parts[0]);
        g.ny = std::stoi(parts[1]);
        g.x_min = std::stod(parts[2]);
        g.x_max = std::stod(parts[3]);
        g.y_min = std::stod(parts[4]);
        g.y_max = std::stod(parts[5]);
    } catch (const std::exception&) {
        throw amo::domain_error("grid: malformed spec '" + s + "'");
    }
    if (g.nx < 2 || g.ny < 2) throw amo::domain_error("grid: resolution must be >= 2");
    if (g.x_max <= g.x_min || g.y_max <= g.y_min)
        throw amo::domain_error("grid: empty rectangle");
    return g;
}

// Resolved configuration echoed into every output header.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void write_atomic(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw amo::domain_error("cannot open output file '" + tmp.string() + "'");
        out << content;
    }
    std::filesystem::rename(tmp, target);
}

std::string csv_header(const std::string& command, const ConfigEcho& cfg) {
    std::string h = "# amotk " + std::string(amo::kVersion) + "\n";
    h += "# command = " + command + "\n";
    for (const auto& [k, v] : cfg) h += "# " + k + " = " + v + "\n";
    return h;
}

json json_header(const std::string& command, const ConfigEcho& cfg) {
    json j;
    j["version"] = amo::kVersion;
    j["command"] = command;
    json c = json::object();
    for (const auto& [k, v] : cfg) c[k] = v;
    j["config"] = c;
    return j;
}

json report_json(const amo::VerificationReport& r) {
    json j;
    j["claim"] = r.claim;
    json params = json::object();
    for (const auto& [k, v] : r.params) {
        if (params.contains(k)) {  // repeated keys (e.g. convergents) become lists
            if (!params[k].is_array()) params[k] = json::array({params[k]});
            params[k].push_back(v);
        } else {
            params[k] = v;
        }
    }
    j["params"] = params;
    json dev = json::object(), thr = json::object();
    for (const auto& e : r.checks) {
        dev[e.name] = e.deviation;
        thr[e.name] = e.threshold;
    }
    j["deviations"] = dev;
    j["thresholds"] = thr;
    j["pass"] = r.pass;
    j["notes"] = r.notes;
    j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

struct Options {
    std::string alpha = "golden";
    double beta = 1.0;
    double theta = 0.0;
    double delta = 1.0;
    int N = 2000;
    int M = 512;
    std::string grid;
    int qmax = 20;
    std::string mode = "union";
    std::string out;
    std::string config_path;
    double level = 0.0;
    double energy = 0.0;
    int ntheta = 64;
    int nkappa = 64;
    std::string claim;
};

// `key = value` lines; '#' starts a comment; flags override file values.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw amo::domain_error("cannot read config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            auto e = s.find_last_not_of(" \t\r");
            s.erase(e == std::string::npos ? 0 : e + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

int run_command(const std::string& command, Options& opt) {
    AlphaSpec aspec = parse_alpha(opt.alpha);

    if (command == "bands") {
        amo::Rational a = aspec.rational(1000);
        ConfigEcho cfg{{"alpha", a.str()},
                       {"beta", num(opt.beta)},
                       {"theta", num(opt.theta)},
                       {"mode", opt.mode}};
        amo::BandSet b = opt.mode == "fixed"
                             ? amo::bands_fixed_theta(a, opt.beta, opt.theta)
                             : amo::bands_union_theta(a, opt.beta);
        std::string body = csv_header(command, cfg) + "lower,upper\n";
        for (const auto& band : b.bands) body += num(band.lo) + "," + num(band.hi) + "\n";
        write_atomic(opt.out, body);
        return kExitOk;
    }

    if (command == "butterfly") {
        ConfigEcho cfg{{"beta", num(opt.beta)},
                       {"theta", num(opt.theta)},
                       {"qmax", std::to_string(opt.qmax)},
                       {"mode", opt.mode}};
        std::string body = csv_header(command, cfg) + "p,q,lower,upper\n";
        for (int q = 1; q <= opt.qmax; ++q) {
            for (int p = q == 1 ? 0 : 1; p < q || (q == 1 && p == 0); ++p) {
                if (std::gcd(p, q) != 1) continue;
                amo::Rational a(p, q);
                amo::BandSet b = opt.mode == "fixed"
                                     ? amo::bands_fixed_theta(a, opt.beta, opt.theta)
                                     : amo::bands_union_theta(a, opt.beta);
                for (const auto& band : b.bands)
                    body += std::to_string(p) + "," + std::to_string(q) + "," +
                            num(band.lo) + "," + num(band.hi) + "\n";
                if (q == 1) break;
            }
        }
        write_atomic(opt.out, body);
        return kExitOk;
    }

    if (command == "ids") {
        amo::Rational a = aspec.rational(1000);
        ConfigEcho cfg{{"alpha", a.str()},
                       {"beta", num(opt.beta)},
                       {"M", std::to_string(opt.M)}};
        amo::StepMeasure mu = amo::ids_measure(a, opt.beta, opt.M);
        std::string body = csv_header(command, cfg) + "E,ids\n";
        double acc = 0.0;
        for (int i = 0; i < mu.size(); ++i) {
            acc += mu.weights[i];
            body += num(mu.points[i]) + "," + num(acc) + "\n";
        }
        write_atomic(opt.out, body);
        return kExitOk;
    }

    if (command == "lyapunov") {
        if (opt.grid.empty())
            throw amo::domain_error("lyapunov: --grid nx:ny:xmin:xmax:ymin:ymax is required");
        GridSpec g = parse_grid(opt.grid);
        ConfigEcho cfg{{"alpha", aspec.text},
                       {"beta", num(opt.beta)},
                       {"theta", num(opt.theta)},
                       {"delta", num(opt.delta)},
                       {"N", std::to_string(opt.N)},
                       {"grid", opt.grid}};
        amo::AmoParams params{aspec.alpha, opt.beta, opt.theta};
        amo::Perturbation pert(opt.delta);
        std::string body = csv_header(command, cfg) + "re,im,lyapunov\n";
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                double x = g.x_min + (g.x_max - g.x_min) * ix / (g.nx - 1);
                double y = g.y_min + (g.y_max - g.y_min) * iy / (g.ny - 1);
                double ly = amo::lyapunov_finite({x, y}, params, pert, opt.N);
                body += num(x) + "," + num(y) + "," + num(ly) + "\n";
            }
        }
        write_atomic(opt.out, body);
        return kExitOk;
    }

    if (command == "potential-field" || command == "level-curve") {
        if (opt.grid.empty())
            throw amo::domain_error(command + ": --grid nx:ny:xmin:xmax:ymin:ymax is required");
        GridSpec g = parse_grid(opt.grid);
        amo::Rational a = aspec.rational(1000);
        ConfigEcho cfg{{"alpha", a.str()},
                       {"beta", num(opt.beta)},
                       {"M", std::to_string(opt.M)},
                       {"grid", opt.grid}};
        amo::StepMeasure mu = amo::ids_measure(a, opt.beta, opt.M);
        amo::ScalarField f =
            amo::potential_field(mu, g.x_min, g.x_max, g.y_min, g.y_max, g.nx, g.ny);
        if (command == "potential-field") {
            std::string body = csv_header(command, cfg) + "x,y,value,singular_flag\n";
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix)
                    body += num(f.x(ix)) + "," + num(f.y(iy)) + "," + num(f.at(ix, iy)) + "," +
                            (f.singular_at(ix, iy) ? "1" : "0") + "\n";
            write_atomic(opt.out, body);
        } else {
            cfg.push_back({"level", num(opt.level)});
            auto curves = amo::level_curves(f, opt.level);
            std::string body = csv_header(command, cfg) + "curve_id,x,y,closed\n";
            for (std::size_t id = 0; id < curves.size(); ++id)
                for (const auto& p : curves[id].points)
                    body += std::to_string(id) + "," + num(p.real()) + "," + num(p.imag()) +
                            "," + (curves[id].closed ? "1" : "0") + "\n";
            write_atomic(opt.out, body);
        }
        return kExitOk;
    }

    if (command == "hdelta-cloud") {
        amo::Rational a = aspec.rational(1000);
        ConfigEcho cfg{{"alpha", a.str()},
                       {"beta", num(opt.beta)},
                       {"delta", num(opt.delta)},
                       {"ntheta", std::to_string(opt.ntheta)},
                       {"nkappa", std::to_string(opt.nkappa)}};
        amo::PointCloud cloud =
            amo::hdelta_cloud(a, opt.beta, amo::Perturbation(opt.delta), opt.ntheta, opt.nkappa);
        std::string body = csv_header(command, cfg) + "re,im,theta_index,kappa_index\n";
        for (const auto& p : cloud.points)
            body += num(p.z.real()) + "," + num(p.z.imag()) + "," +
                    std::to_string(p.theta_index) + "," + std::to_string(p.kappa_index) + "\n";
        write_atomic(opt.out, body);
        return kExitOk;
    }

    if (command == "localize") {
        ConfigEcho cfg{{"alpha", aspec.text},
                       {"beta", num(opt.beta)},
                       {"theta", num(opt.theta)},
                       {"E", num(opt.energy)},
                       {"N", std::to_string(opt.N)}};
        amo::AmoParams params{aspec.alpha, opt.beta, opt.theta};
        amo::LocalizationResult res = amo::localization_probe(params, opt.energy, opt.N);
        json j = json_header(command, cfg);
        j["eigenvalue"] = res.eigenvalue;
        j["decay_rate"] = res.decay_rate;
        j["fit_residual"] = res.fit_residual;
        j["converged"] = res.converged;
        j["iterations"] = res.iterations;
        write_atomic(opt.out, j.dump(2) + "\n");
        return kExitOk;
    }

    if (command == "gaps") {
        amo::Rational a = aspec.rational(1000);
        ConfigEcho cfg{{"alpha", a.str()},
                       {"beta", num(opt.beta)},
                       {"theta", num(opt.theta)},
                       {"mode", opt.mode}};
        amo::BandSet b = opt.mode == "fixed"
                             ? amo::bands_fixed_theta(a, opt.beta, opt.theta)
                             : amo::bands_union_theta(a, opt.beta);
        amo::GapReport rep = amo::gap_report(b);
        json j = json_header(command, cfg);
        j["exploratory"] = true;
        j["total_measure"] = rep.total_measure;
        j["band_count"] = rep.band_count;
        json gaps = json::array();
        for (const auto& gp : rep.gaps)
            gaps.push_back({{"left", gp.left}, {"right", gp.right}, {"length", gp.length}});
        j["gaps"] = gaps;
        write_atomic(opt.out, j.dump(2) + "\n");
        return kExitOk;
    }

    if (command == "verify") {
        amo::Rational a = aspec.rational(1000);
        amo::VerificationReport rep;
        if (opt.claim == "duality") {
            rep = amo::check_duality(a, opt.beta);
        } else if (opt.claim == "thouless") {
            std::vector<std::complex<double>> zs;
            for (int k = 0; k < 10; ++k) {
                double ang = 2.0 * std::numbers::pi * (k + 0.3) / 10.0;
                zs.push_back(8.0 * std::exp(std::complex<double>(0.0, ang)));
            }
            rep = amo::check_thouless(a, opt.beta, zs, opt.N, opt.M);
        } else if (opt.claim == "equilibrium") {
            rep = amo::check_equilibrium(a, opt.beta, opt.M);
        } else if (opt.claim == "theorem1") {
            double x = aspec.alpha.val - std::floor(aspec.alpha.val);
            std::vector<amo::Rational> cs;
            if (aspec.alpha.is_rational()) {
                cs.push_back(a);
            } else {
                for (const auto& c : amo::convergents(amo::cf_expand(x, 40)))
                    if (c.q >= 5 && c.q <= opt.qmax) cs.push_back(c);
            }
            if (cs.empty()) throw amo::domain_error("verify theorem1: no convergents under qmax");
            rep = amo::check_theorem1(cs, opt.beta, opt.delta);
        } else if (opt.claim == "localization") {
            rep = amo::check_localization(a, opt.beta, 5);
        } else {
            throw amo::domain_error("verify: unknown claim '" + opt.claim + "'");
        }
        ConfigEcho cfg{{"alpha", aspec.text},
                       {"beta", num(opt.beta)},
                       {"delta", num(opt.delta)},
                       {"claim", opt.claim}};
        json j = json_header(command, cfg);
        json body = report_json(rep);
        j.update(body);
        write_atomic(opt.out, j.dump(2) + "\n");
        return rep.pass ? kExitOk : kExitNumeric;
    }

    std::cerr << "amo: unknown command '" << command << "'\n"
              << "usage: amo {bands|butterfly|ids|lyapunov|potential-field|level-curve|"
                 "hdelta-cloud|localize|gaps|verify} [flags]\n";
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"almost Mathieu operator toolkit"};
    app.allow_extras();

    Options opt;
    std::string command;
    app.add_option("command", command, "one of: bands butterfly ids lyapunov potential-field "
                                       "level-curve hdelta-cloud localize gaps verify");
    app.add_option("claim", opt.claim, "verify claim (duality thouless equilibrium theorem1 "
                                       "localization)");
    auto* o_alpha = app.add_option("--alpha", opt.alpha, "frequency: p/q, preset, or decimal");
    auto* o_beta = app.add_option("--beta", opt.beta, "coupling");
    auto* o_theta = app.add_option("--theta", opt.theta, "phase");
    auto* o_delta = app.add_option("--delta", opt.delta, "non-self-adjoint perturbation");
    auto* o_N = app.add_option("--N", opt.N, "truncation / cocycle length");
    auto* o_M = app.add_option("--M", opt.M, "measure discretization size");
    auto* o_grid = app.add_option("--grid", opt.grid, "nx:ny:xmin:xmax:ymin:ymax");
    auto* o_qmax = app.add_option("--qmax", opt.qmax, "max denominator");
    auto* o_mode = app.add_option("--mode", opt.mode, "fixed | union");
    app.add_option("--out", opt.out, "output path (stdout when omitted)");
    app.add_option("--config", opt.config_path, "key = value config file");
    auto* o_level = app.add_option("--level", opt.level, "level-curve value c");
    auto* o_E = app.add_option("--E", opt.energy, "localize target energy");
    auto* o_ntheta = app.add_option("--ntheta", opt.ntheta, "theta grid size");
    auto* o_nkappa = app.add_option("--nkappa", opt.nkappa, "kappa grid size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitInvalid : kExitOk;
    }

    try {
        if (!opt.config_path.empty()) {
            auto kv = load_config(opt.config_path);
            auto gets = [&](CLI::Option* o, const char* key, std::string& field) {
                if (o->count() == 0 && kv.count(key)) field = kv[key];
            };
            auto getd = [&](CLI::Option* o, const char* key, double& field) {
                if (o->count() == 0 && kv.count(key)) field = std::stod(kv[key]);
            };
            auto geti = [&](CLI::Option* o, const char* key, int& field) {
                if (o->count() == 0 && kv.count(key)) field = std::stoi(kv[key]);
            };
            gets(o_alpha, "alpha", opt.alpha);
            getd(o_beta, "beta", opt.beta);
            getd(o_theta, "theta", opt.theta);
            getd(o_delta, "delta", opt.delta);
            geti(o_N, "N", opt.N);
            geti(o_M, "M", opt.M);
            gets(o_grid, "grid", opt.grid);
            geti(o_qmax, "qmax", opt.qmax);
            gets(o_mode, "mode", opt.mode);
            getd(o_level, "level", opt.level);
            getd(o_E, "E", opt.energy);
            geti(o_ntheta, "ntheta", opt.ntheta);
            geti(o_nkappa, "nkappa", opt.nkappa);
        }
        if (command.empty()) {
            std::cerr << "amo: missing command\n";
            return kExitUsage;
        }
        if (opt.mode != "fixed" && opt.mode != "union")
            throw amo::domain_error("mode must be 'fixed' or 'union'");
        return run_command(command, opt);
    } catch (const amo::domain_error& e) {
        std::cerr << "amo: invalid parameters: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const amo::size_error& e) {
        std::cerr << "amo: invalid parameters: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const amo::numeric_error& e) {
        std::cerr << "amo: numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "amo: error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
