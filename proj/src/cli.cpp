#include "isospec/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "isospec/errors.hpp"
#include "isospec/experiments.hpp"

namespace isospec::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;

struct DomainArgs {
    std::string shape = "equilateral";
    double side = 1.0;
    double l1 = 1.0;
    double l2 = 1.0;
    double radius = 1.0;
    double s1 = 1.0;
    double s2 = 1.0;
    double aperture = std::numbers::pi / 3.0;
    int sides = 6;
    std::string lengths = "3,4,5";
    std::string domain_file;
};

struct BcArgs {
    std::string bc = "dirichlet";
    double sigma = 1.0;
};

struct FemArgs {
    int max_refinement = 5;
    int dense_threshold = 400;
    double eig_tolerance = 1e-10;
    bool no_extrapolate = false;

    FemOptions options() const { return {max_refinement, dense_threshold, eig_tolerance, !no_extrapolate}; }
};

struct Job {
    DomainArgs domain;
    BcArgs bc;
    FemArgs fem;
    int n = 1;
    std::string engine = "auto";
    std::string map = "1,0,0,1";
    int random_maps = 0;
    int random_shears = 20;
    double h = 1.0;
    std::string potential = "harmonic";
    int power = 4;
    double beta = 0.2;
    double half_width = 0.0;  // 0 picks a default grid
    int points = 201;
    double a = 1.0, b = 1.0, c_plus = 0.0, c_minus = 0.0;
    double from = 0.3, to = 2.8;
    int steps = 40;
    std::string aspects = "1,1.2,1.5,1.633,2,5,10";
    std::string kshape = "square";
    int n_max = 50;
    std::string output;
    std::uint64_t seed = 42;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (item.empty() || used != item.size()) throw InvalidArgument("not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

LinearMap2 parse_map(const std::string& text) {
    const std::vector<double> v = parse_list(text);
    if (v.size() != 4) throw InvalidArgument("a map needs four entries a11,a12,a21,a22");
    return {v[0], v[1], v[2], v[3]};
}

Domain make_domain(const DomainArgs& a) {
    if (a.shape == "equilateral") return equilateral_triangle(a.side);
    if (a.shape == "square") return rectangle(a.side, a.side);
    if (a.shape == "rectangle") return rectangle(a.l1, a.l2);
    if (a.shape == "disk") return disk(a.radius);
    if (a.shape == "ellipse") return Ellipse::make({0.0, 0.0}, a.s1, a.s2);
    if (a.shape == "isosceles") return isosceles_triangle(a.aperture);
    if (a.shape == "regular") return regular_polygon(a.sides, a.radius);
    if (a.shape == "triangle") {
        const std::vector<double> l = parse_list(a.lengths);
        if (l.size() != 3) throw InvalidArgument("--lengths needs three side lengths");
        return triangle_from_sides(l[0], l[1], l[2]);
    }
    if (a.shape == "file") {
        std::ifstream in(a.domain_file);
        if (!in) throw InvalidArgument("cannot open domain file '" + a.domain_file + "'");
        return read_domain(in);
    }
    throw InvalidArgument("unknown shape '" + a.shape + "'");
}

BoundaryCondition make_bc(const BcArgs& a) {
    if (a.bc == "dirichlet") return BoundaryCondition::dirichlet();
    if (a.bc == "neumann") return BoundaryCondition::neumann();
    if (a.bc == "robin") return BoundaryCondition::robin(a.sigma);
    throw InvalidArgument("unknown boundary condition '" + a.bc + "'");
}

Engine make_engine(const std::string& e) {
    if (e == "auto") return Engine::automatic;
    if (e == "exact") return Engine::exact;
    if (e == "fem") return Engine::fem;
    throw InvalidArgument("unknown engine '" + e + "'");
}

PotentialSpec make_potential(const Job& j) {
    if (j.potential == "harmonic") return PotentialSpec::harmonic();
    if (j.potential == "power") return PotentialSpec::power_radial(j.power);
    if (j.potential == "trisym") return PotentialSpec::tri_sym(j.beta);
    throw InvalidArgument("unknown potential '" + j.potential + "'");
}

void add_domain_options(CLI::App* app, DomainArgs& a) {
    app->add_option("--shape", a.shape,
                    "equilateral, square, rectangle, disk, ellipse, isosceles, regular, triangle or file");
    app->add_option("--side", a.side, "side of the equilateral triangle or square");
    app->add_option("--l1", a.l1, "first rectangle side");
    app->add_option("--l2", a.l2, "second rectangle side");
    app->add_option("--radius", a.radius, "disk radius or regular polygon circumradius");
    app->add_option("--s1", a.s1, "first ellipse semi-axis");
    app->add_option("--s2", a.s2, "second ellipse semi-axis");
    app->add_option("--aperture", a.aperture, "isosceles apex angle (radians)");
    app->add_option("--sides", a.sides, "number of sides of a regular polygon");
    app->add_option("--lengths", a.lengths, "triangle side lengths a,b,c");
    app->add_option("--domain", a.domain_file, "domain file for --shape file");
}

void add_bc_options(CLI::App* app, BcArgs& a) {
    app->add_option("--bc", a.bc, "dirichlet, neumann or robin");
    app->add_option("--sigma", a.sigma, "Robin parameter");
}

void add_fem_options(CLI::App* app, FemArgs& a) {
    app->add_option("--max-refinement", a.max_refinement, "finest mesh refinement level");
    app->add_option("--dense-threshold", a.dense_threshold, "largest system solved densely");
    app->add_option("--eig-tolerance", a.eig_tolerance, "eigensolver residual tolerance");
    app->add_flag("--no-extrapolate", a.no_extrapolate, "report the finest-level values");
}

std::vector<double> aperture_grid(double from, double to, int steps) {
    if (steps < 1) throw InvalidArgument("--steps must be >= 1");
    std::vector<double> out;
    for (int i = 0; i <= steps; ++i) out.push_back(from + (to - from) * i / steps);
    return out;
}

nlohmann::ordered_json reports_json(const std::string& command, std::uint64_t seed,
                                    const std::vector<BoundReport>& reports) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["seed"] = seed;
    j["reports"] = nlohmann::ordered_json::array();
    for (const BoundReport& r : reports) j["reports"].push_back(to_json(r));
    return j;
}

int finish_reports(std::ostream& out, const std::string& command, std::uint64_t seed,
                   const std::vector<BoundReport>& reports) {
    out << reports_json(command, seed, reports).dump(2) << '\n';
    for (const BoundReport& r : reports)
        if (!r.holds) return kExitViolated;
    return kExitOk;
}

void write_csv(std::ostream& out, std::span<const SweepRow> rows, std::uint64_t seed) {
    write_sweep_csv(out, rows);
    out << "# seed=" << seed << '\n';
}

// Splits "key=value" lines into flags inserted after the subcommand path so
// that later command-line flags win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw CLI::ConversionError("config line without '=': " + line);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw CLI::ConversionError("config line without key: " + line);
        if (value == "true") {
            tokens.push_back((key.size() == 1 ? "-" : "--") + key);
        } else if (value != "false") {
            tokens.push_back((key.size() == 1 ? "-" : "--") + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    std::size_t pos = 0;
    while (pos < args.size() && !args[pos].empty() && args[pos][0] != '-') ++pos;
    const std::vector<std::string> extra = config_tokens(path);
    args.insert(args.begin() + pos, extra.begin(), extra.end());
    return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    Job j;
    CLI::App app{"Normalized eigenvalue sums and linear-map bounds for plane domains", "isospec"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.add_option("--config", "key=value file; command-line flags override it");
    app.add_option("--output,-o", j.output, "write results here instead of standard output");
    app.add_option("--seed", j.seed, "seed for random map matrices");

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a domain");
    add_domain_options(spectrum, j.domain);
    add_bc_options(spectrum, j.bc);
    add_fem_options(spectrum, j.fem);
    spectrum->add_option("-n,--n", j.n, "number of eigenvalues");
    spectrum->add_option("--engine", j.engine, "auto, exact or fem");

    auto* moments_cmd = app.add_subcommand("moments", "area, centroid and second moments of a domain");
    add_domain_options(moments_cmd, j.domain);

    auto* verify = app.add_subcommand("verify", "check a linear-map eigenvalue bound");
    verify->require_subcommand(1);
    auto* theorem1 = verify->add_subcommand("theorem1", "Dirichlet/Neumann sums on T(D) against D");
    add_domain_options(theorem1, j.domain);
    add_bc_options(theorem1, j.bc);
    add_fem_options(theorem1, j.fem);
    theorem1->add_option("-n,--n", j.n, "largest eigenvalue count");
    theorem1->add_option("--map", j.map, "T as a11,a12,a21,a22");
    theorem1->add_option("--random", j.random_maps, "use this many seeded random maps instead of --map");

    auto* robin = verify->add_subcommand("robin", "Robin sums with the rescaled parameter");
    add_domain_options(robin, j.domain);
    add_fem_options(robin, j.fem);
    robin->add_option("--sigma", j.bc.sigma, "Robin parameter on D");
    robin->add_option("-n,--n", j.n, "largest eigenvalue count");
    robin->add_option("--map", j.map, "T as a11,a12,a21,a22");

    auto* schrod = verify->add_subcommand("schrodinger", "Schrodinger sums for (h, W) and the transform");
    schrod->add_option("--potential", j.potential, "harmonic, power or trisym");
    schrod->add_option("--power", j.power, "exponent for --potential power");
    schrod->add_option("--beta", j.beta, "cubic coefficient for --potential trisym");
    schrod->add_option("--planck", j.h, "Planck constant h");
    schrod->add_option("-n,--n", j.n, "largest eigenvalue count");
    schrod->add_option("--map", j.map, "T as a11,a12,a21,a22");
    schrod->add_option("--half-width", j.half_width, "box half-width (default: chosen from W)");
    schrod->add_option("--points", j.points, "grid points per side, odd, >= 51");

    auto* quad = verify->add_subcommand("quad", "piecewise-linear image of the reference square");
    add_bc_options(quad, j.bc);
    add_fem_options(quad, j.fem);
    quad->add_option("--a", j.a, "horizontal stretch");
    quad->add_option("--b", j.b, "vertical stretch");
    quad->add_option("--c-plus", j.c_plus, "shear on the upper half plane");
    quad->add_option("--c-minus", j.c_minus, "shear on the lower half plane");
    quad->add_option("-n,--n", j.n, "largest eigenvalue count");

    auto* sweep = app.add_subcommand("sweep", "CSV sweeps");
    sweep->require_subcommand(1);
    auto* isosceles = sweep->add_subcommand("isosceles", "normalized sums over isosceles apertures");
    add_bc_options(isosceles, j.bc);
    add_fem_options(isosceles, j.fem);
    isosceles->add_option("-n,--n", j.n, "eigenvalue count");
    isosceles->add_option("--from", j.from, "first aperture");
    isosceles->add_option("--to", j.to, "last aperture");
    isosceles->add_option("--steps", j.steps, "number of intervals (steps + 1 rows)");

    auto* rect = sweep->add_subcommand("rectangle", "exact Dirichlet sums of l x 1 rectangles");
    rect->add_option("-n,--n", j.n, "eigenvalue count");
    rect->add_option("--aspects", j.aspects, "comma-separated aspect ratios >= 1");

    auto* kroeger = sweep->add_subcommand("kroeger", "(mu_1 + ... + mu_n) A / n^2 against 2 pi");
    kroeger->add_option("--shape", j.kshape, "square, disk or equilateral");
    kroeger->add_option("--n-max", j.n_max, "largest n");
    auto* weyl = sweep->add_subcommand("weyl", "mu_n A / (4 pi n)");
    weyl->add_option("--shape", j.kshape, "square, disk or equilateral");
    weyl->add_option("--n-max", j.n_max, "largest n");

    auto* dvs = sweep->add_subcommand("disk-vs-square", "square minus disk normalized Dirichlet sums");
    dvs->add_option("--n-max", j.n_max, "largest n");

    auto* conj = app.add_subcommand("conjecture", "exploratory scans (never fail)");
    conj->require_subcommand(1);
    auto* c1 = conj->add_subcommand("c1", "lambda_1 A^3 / I over isosceles apertures");
    add_fem_options(c1, j.fem);
    c1->add_option("--from", j.from, "first aperture");
    c1->add_option("--to", j.to, "last aperture");
    c1->add_option("--steps", j.steps, "number of intervals (steps + 1 rows)");
    auto* cq = conj->add_subcommand("quad", "quadrilateral bound with I in place of I0");
    add_bc_options(cq, j.bc);
    add_fem_options(cq, j.fem);
    cq->add_option("-n,--n", j.n, "eigenvalue count");
    cq->add_option("--random", j.random_shears, "number of seeded random shear pairs");

    std::vector<std::string> args;
    try {
        args = expand_config(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::ofstream file;
    if (!j.output.empty()) {
        file.open(j.output);
        if (!file) {
            err << "error: cannot write '" << j.output << "'\n";
            return kExitUsage;
        }
    }
    std::ostream& o = j.output.empty() ? out : file;

    try {
        const FemOptions fem = j.fem.options();
        if (*spectrum) {
            const Spectrum s = compute_spectrum(make_domain(j.domain), make_bc(j.bc), j.n, make_engine(j.engine), fem);
            std::vector<SweepRow> rows;
            for (int i = 0; i < j.n; ++i) rows.push_back({double(i + 1), s.values[i], s.method, s.error_estimates[i]});
            write_csv(o, rows, j.seed);
            return kExitOk;
        }
        if (*moments_cmd) {
            const Domain d = make_domain(j.domain);
            const GeometricMoments m = moments(d);
            nlohmann::ordered_json r;
            r["domain"] = describe(d);
            r["area"] = m.area;
            r["centroid"] = {m.centroid.x1, m.centroid.x2};
            r["moment_matrix"] = {{m.moment_matrix(0, 0), m.moment_matrix(0, 1)},
                                  {m.moment_matrix(1, 0), m.moment_matrix(1, 1)}};
            r["inertia_centroid"] = m.inertia_centroid;
            r["inertia_origin"] = m.inertia_origin;
            r["perimeter"] = m.perimeter;
            r["symmetry_order"] = symmetry_order(d);
            r["seed"] = j.seed;
            o << r.dump(2) << '\n';
            return kExitOk;
        }
        if (*theorem1) {
            const Domain d = make_domain(j.domain);
            const std::vector<LinearMap2> maps =
                j.random_maps > 0 ? random_invertible_maps(j.random_maps, j.seed) : std::vector{parse_map(j.map)};
            std::vector<BoundReport> reports;
            for (const LinearMap2& T : maps)
                for (BoundReport& r : verify_linear_map_bounds(d, T, make_bc(j.bc), j.n, fem))
                    reports.push_back(std::move(r));
            return finish_reports(o, "verify theorem1", j.seed, reports);
        }
        if (*robin) {
            return finish_reports(o, "verify robin", j.seed,
                                  verify_robin_bounds(make_domain(j.domain), parse_map(j.map), j.bc.sigma, j.n, fem));
        }
        if (*schrod) {
            const PotentialSpec W = make_potential(j);
            const LinearMap2 T = parse_map(j.map);
            GridSpec grid = default_bound_grid(W, j.h, T, j.n, j.points);
            if (j.half_width > 0.0) grid.half_width = j.half_width;
            return finish_reports(o, "verify schrodinger", j.seed, verify_schrodinger_bounds(W, j.h, T, j.n, grid));
        }
        if (*quad) {
            const auto P = PiecewiseLinearMap::make(j.a, j.b, j.c_plus, j.c_minus);
            return finish_reports(o, "verify quad", j.seed, verify_quad_bounds(P, make_bc(j.bc), j.n, fem));
        }
        if (*isosceles) {
            const std::vector<double> alphas = aperture_grid(j.from, j.to, j.steps);
            write_csv(o, sweep_isosceles(j.n, alphas, make_bc(j.bc), fem), j.seed);
            return kExitOk;
        }
        if (*rect) {
            write_csv(o, rectangle_sum_family(j.n, parse_list(j.aspects)), j.seed);
            return kExitOk;
        }
        if (*kroeger || *weyl) {
            KroegerShape shape;
            if (j.kshape == "square") shape = KroegerShape::square;
            else if (j.kshape == "disk") shape = KroegerShape::disk;
            else if (j.kshape == "equilateral") shape = KroegerShape::equilateral;
            else throw InvalidArgument("unknown shape '" + j.kshape + "'");
            const KroegerWeyl kw = kroeger_weyl_check(shape, j.n_max);
            write_csv(o, *kroeger ? kw.kroeger : kw.weyl, j.seed);
            if (*kroeger) {
                o << "# bound_holds=" << (kw.bound_holds ? "true" : "false") << '\n';
                return kw.bound_holds ? kExitOk : kExitViolated;
            }
            return kExitOk;
        }
        if (*dvs) {
            const DiskVsSquare r = disk_vs_square(j.n_max);
            const Spectrum ss = rectangle_spectrum(1.0, 1.0, BoundaryCondition::dirichlet(), j.n_max);
            const Spectrum sd = disk_spectrum(1.0, BoundaryCondition::dirichlet(), j.n_max);
            const double fs = scale_factor(rectangle(1.0, 1.0)), fd = scale_factor(disk(1.0));
            std::vector<SweepRow> rows;
            for (int n = 1; n <= j.n_max; ++n)
                rows.push_back({double(n), ss.sum(n) * fs - sd.sum(n) * fd, Method::exact,
                                ss.error_sum(n) * fs + sd.error_sum(n) * fd});
            write_sweep_csv(o, rows);
            o << "# square_larger=";
            for (std::size_t i = 0; i < r.square_larger.size(); ++i) o << (i ? "," : "") << r.square_larger[i];
            o << "\n# ties=";
            for (std::size_t i = 0; i < r.ties.size(); ++i) o << (i ? "," : "") << r.ties[i];
            o << "\n# seed=" << j.seed << '\n';
            return kExitOk;
        }
        if (*c1) {
            const std::vector<double> alphas = aperture_grid(j.from, j.to, j.steps);
            std::vector<Polygon> tris;
            for (double a : alphas) tris.push_back(isosceles_triangle(a));
            const ConjectureScan scan = conjecture_scan_c1(tris, fem, alphas);
            write_sweep_csv(o, scan.rows);
            int outside = 0;
            for (bool w : scan.within_bounds) outside += w ? 0 : 1;
            o << "# outside_bounds=" << outside << "\n# seed=" << j.seed << '\n';
            return kExitOk;
        }
        if (*cq) {
            std::vector<PiecewiseLinearMap> maps;
            for (const LinearMap2& T : random_invertible_maps(j.random_shears, j.seed)) {
                // shear pairs in [-2, 2]; the stretches stay 1
                maps.push_back(PiecewiseLinearMap::make(1.0, 1.0, T.a12(), T.a21()));
            }
            write_csv(o, scan_quad_centroid_variant(maps, make_bc(j.bc), j.n, fem), j.seed);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace isospec::cli
