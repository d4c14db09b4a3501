#include "cli_support.hpp"

#include "rainbow/continuum.hpp"
#include "rainbow/entanglement.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/fitting.hpp"
#include "rainbow/lattice.hpp"
#include "rainbow/parallel.hpp"
#include "rainbow/qubism.hpp"
#include "rainbow/sdrg.hpp"
#include "rainbow/serialize.hpp"
#include "rainbow/spectra.hpp"
#include "rainbow/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <thread>

using namespace rainbow;
using rainbow::cli::Output;
using rainbow::cli::UsageError;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kNumeric = 3 };

/// Flags shared by every subcommand.
struct Common {
    std::string out = "-";
    std::string format;
    int jobs = 1;
};

/// Exactly one of --alpha, --h, --z; values may be ranges for sweeps.
struct GeometryFlags {
    std::string alpha, h, z;
    CLI::Option* opt_alpha = nullptr;
    CLI::Option* opt_h = nullptr;
    CLI::Option* opt_z = nullptr;

    std::string kind() const {
        if (opt_alpha->count() > 0)
            return "alpha";
        if (opt_h->count() > 0)
            return "h";
        if (opt_z->count() > 0)
            return "z";
        throw UsageError("one of --alpha, --h or --z is required");
    }
    std::vector<double> values() const {
        const std::string k = kind();
        return cli::parse_double_range(k == "alpha" ? alpha : k == "h" ? h : z);
    }
    double single() const {
        const auto v = values();
        if (v.size() != 1)
            throw UsageError("--" + kind() + " takes a single value here");
        return v.front();
    }
};

void add_geometry(CLI::App* sub, GeometryFlags& g, const std::string& what) {
    g.opt_alpha = sub->add_option("--alpha", g.alpha, "Deformation alpha in (0,1]" + what);
    g.opt_h = sub->add_option("--h", g.h, "Deformation h = -2 ln alpha" + what);
    g.opt_z = sub->add_option("--z", g.z, "Scaling variable z = h L" + what);
    g.opt_alpha->excludes(g.opt_h)->excludes(g.opt_z);
    g.opt_h->excludes(g.opt_z);
}

void add_jobs(CLI::App* sub, Common& c) {
    c.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    sub->add_option("--jobs", c.jobs, "Worker threads for sweeps")
        ->envname("RAINBOW_LAB_JOBS")
        ->check(CLI::PositiveNumber);
}

void add_output(CLI::App* sub, Common& c, std::vector<std::string> formats) {
    c.format = formats.front();
    sub->add_option("--out", c.out, "Output path, '-' for standard output")->capture_default_str();
    sub->add_option("--format", c.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember(formats));
}

CouplingProfile make_profile(int L, const std::string& kind, double value) {
    if (kind == "alpha")
        return build_rainbow_profile(L, value);
    if (kind == "h") {
        if (!(value >= 0.0))
            throw DomainError("h must be non-negative");
        return profile_from_z(L, value * L);
    }
    return profile_from_z(L, value);
}

void warn_underflow(const CouplingProfile& p) {
    if (p.underflow_warning)
        std::cerr << "warning: smallest coupling " << format_double(p.smallest_coupling)
                  << " is close to the subnormal range (L=" << p.L << ", z=" << format_double(p.z)
                  << ")\n";
}

/// Every option of the subcommand with its effective value. --jobs is left
/// out so artifacts do not depend on the worker count.
json config_echo(const CLI::App& sub) {
    json j = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "jobs")
            continue;
        if (opt->count() > 0) {
            const auto& res = opt->results();
            if (res.size() == 1)
                j[name] = res.front();
            else
                j[name] = res;
        } else if (!opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
        }
    }
    return j;
}

struct Context {
    std::string command;
    json config;
};

void write_csv_header(std::ostream& os, const Context& ctx, std::vector<std::string> extra = {}) {
    auto lines = cli::provenance_lines(ctx.command, ctx.config);
    lines.insert(lines.end(), extra.begin(), extra.end());
    write_comment_header(os, lines);
}

json json_document(const Context& ctx) {
    json j;
    j["provenance"] = cli::provenance_json(ctx.command, ctx.config);
    return j;
}

void emit_json(Output& out, const json& doc) {
    out.stream() << doc.dump(2) << '\n';
    out.finish();
}

json json_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> orders_from(const std::string& text) {
    auto orders = cli::parse_double_range(text);
    for (double n : orders)
        if (!(n >= 1.0))
            throw UsageError("Renyi orders must be >= 1");
    return orders;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
    Common common;
    GeometryFlags geometry;
    int L = 0;
    std::string orbitals;
};

void run_spectrum(const SpectrumOpts& o, const Context& ctx) {
    const auto profile = make_profile(o.L, o.geometry.kind(), o.geometry.single());
    warn_underflow(profile);
    const auto spec = diagonalize(hopping_matrix_1d(profile));
    if (!o.orbitals.empty()) {
        Output bin(o.orbitals, true);
        write_orbitals_binary(bin.stream(), spec.orbitals);
        bin.finish();
    }
    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        doc["profile"] = to_json(profile);
        doc["residual"] = spec.residual;
        json levels = json::array();
        for (int k = 0; k < spec.dim(); ++k)
            levels.push_back({{"m", k - spec.dim() / 2}, {"energy", spec.energies[k]}});
        doc["levels"] = std::move(levels);
        emit_json(out, doc);
        return;
    }
    write_csv_header(out.stream(), ctx, {"profile: " + to_json(profile).dump()});
    write_spectrum_csv(out.stream(), spec);
    out.finish();
}

// ------------------------------------------------------------ wavefunction

struct WavefunctionOpts {
    Common common;
    GeometryFlags geometry;
    int L = 0;
    std::string m = "0";
    bool overlaps = false;
};

void run_wavefunction(const WavefunctionOpts& o, const Context& ctx) {
    const auto profile = make_profile(o.L, o.geometry.kind(), o.geometry.single());
    warn_underflow(profile);
    Output out(o.common.out);

    if (o.overlaps) {
        const auto curve = orbital_overlap_curve(profile.h, o.L);
        if (o.common.format == "json") {
            json doc = json_document(ctx);
            json rows = json::array();
            for (int k = 0; k < o.L; ++k)
                rows.push_back({{"m", -1 - k}, {"overlap", curve[k]}});
            doc["profile"] = to_json(profile);
            doc["overlaps"] = std::move(rows);
            emit_json(out, doc);
            return;
        }
        write_csv_header(out.stream(), ctx, {"profile: " + to_json(profile).dump()});
        out.stream() << "m,m_over_L,overlap\n";
        for (int k = 0; k < o.L; ++k) {
            const int m = -1 - k;
            out.stream() << m << ',' << format_double(static_cast<double>(-m) / o.L) << ','
                         << format_double(curve[k]) << '\n';
        }
        out.finish();
        return;
    }

    const auto levels = cli::parse_int_range(o.m);
    for (int m : levels)
        if (m < -o.L || m >= o.L)
            throw UsageError("level m=" + std::to_string(m) + " outside [-L, L-1]");
    const auto spec = diagonalize(hopping_matrix_1d(profile));

    struct Pair {
        int m;
        Eigen::VectorXd analytic, exact;
        double overlap;
    };
    std::vector<Pair> pairs;
    for (int m : levels) {
        Eigen::VectorXd a = analytic_wavefunction(m, profile.h, o.L).components;
        Eigen::VectorXd e = spec.orbitals.col(spec.level_index(m));
        if (a.dot(e) < 0.0)
            e = -e;
        pairs.push_back({m, a, e, wavefunction_overlap(a, e)});
    }

    if (o.common.format == "json") {
        json doc = json_document(ctx);
        doc["profile"] = to_json(profile);
        json list = json::array();
        for (const auto& p : pairs)
            list.push_back({{"m", p.m},
                            {"overlap", p.overlap},
                            {"analytic", std::vector<double>(p.analytic.begin(), p.analytic.end())},
                            {"exact", std::vector<double>(p.exact.begin(), p.exact.end())}});
        doc["levels"] = std::move(list);
        emit_json(out, doc);
        return;
    }
    std::vector<std::string> extra{"profile: " + to_json(profile).dump()};
    for (const auto& p : pairs)
        extra.push_back("overlap m=" + std::to_string(p.m) + ": " + format_double(p.overlap));
    write_csv_header(out.stream(), ctx, extra);
    out.stream() << "m,n,n_over_L,analytic,exact\n";
    for (const auto& p : pairs)
        for (int i = 0; i < 2 * o.L; ++i) {
            const double n = site_label(i, o.L);
            out.stream() << p.m << ',' << format_double(n) << ',' << format_double(n / o.L) << ','
                         << format_double(p.analytic[i]) << ',' << format_double(p.exact[i]) << '\n';
        }
    out.finish();
}

// ----------------------------------------------------------- velocity-scan

struct VelocityOpts {
    Common common;
    int L = 0;
    std::string z;
};

void run_velocity(const VelocityOpts& o, const Context& ctx) {
    const auto zs = cli::parse_double_range(o.z);
    std::vector<FermiVelocityEstimate> est(zs.size());
    std::vector<double> fits(zs.size());
    parallel_for(zs.size(), o.common.jobs, [&](std::size_t i) {
        const auto profile = profile_from_z(o.L, zs[i]);
        warn_underflow(profile);
        const auto spec = diagonalize(hopping_matrix_1d(profile));
        est[i] = fermi_velocity(spec, o.L, zs[i]);
        fits[i] = fermi_velocity_fit(spec, o.L, std::min(4, o.L - 1));
    });
    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        json rows = json::array();
        for (std::size_t i = 0; i < zs.size(); ++i)
            rows.push_back({{"z", zs[i]},
                            {"a_numeric", est[i].a_numeric},
                            {"a_fit", fits[i]},
                            {"a_analytic", est[i].a_analytic}});
        doc["points"] = std::move(rows);
        emit_json(out, doc);
        return;
    }
    write_csv_header(out.stream(), ctx);
    out.stream() << "z,a_numeric,a_fit,a_analytic\n";
    for (std::size_t i = 0; i < zs.size(); ++i)
        out.stream() << format_double(zs[i]) << ',' << format_double(est[i].a_numeric) << ','
                     << format_double(fits[i]) << ',' << format_double(est[i].a_analytic) << '\n';
    out.finish();
}

// ------------------------------------------------------------ validity-map

struct ValidityOpts {
    Common common;
    std::string L, z, contours;
};

void run_validity(const ValidityOpts& o, const Context& ctx) {
    const auto map = validity_map(cli::parse_int_range(o.L), cli::parse_double_range(o.z),
                                  o.common.jobs);
    if (!o.contours.empty()) {
        Output c(o.contours);
        write_csv_header(c.stream(), ctx);
        write_contour_csv(c.stream(), map);
        c.finish();
    }
    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        json grid = json::array();
        for (const auto& p : map.grid)
            grid.push_back({{"L", p.L}, {"z", p.z}, {"overlap", p.overlap}});
        json contours = json::array();
        for (const auto& c : map.contours)
            contours.push_back({{"L", c.L},
                                {"z_at_0.90", json_or_null(c.z_at_090)},
                                {"z_at_0.95", json_or_null(c.z_at_095)}});
        doc["grid"] = std::move(grid);
        doc["contours"] = std::move(contours);
        emit_json(out, doc);
        return;
    }
    write_csv_header(out.stream(), ctx);
    write_validity_csv(out.stream(), map);
    out.finish();
}

// ------------------------------------------------------------ entropy-scan

struct EntropyScanOpts {
    Common common;
    GeometryFlags geometry;
    std::string L;
    std::string orders = "1";
    bool blocks = false;
    std::string fit = "none";
};

void run_entropy_scan(const EntropyScanOpts& o, const Context& ctx) {
    const auto Ls = cli::parse_int_range(o.L);
    const std::string kind = o.geometry.kind();
    const auto params = o.geometry.values();
    const auto orders = orders_from(o.orders);

    EntropyCurve curve;
    if (o.blocks) {
        if (Ls.size() != 1 || params.size() != 1)
            throw UsageError("--blocks scans one chain: give a single --L and geometry value");
        const auto profile = make_profile(Ls.front(), kind, params.front());
        warn_underflow(profile);
        curve = boundary_block_scan(profile, orders);
        for (auto& p : curve)
            p.param = params.front();
    } else {
        std::vector<std::pair<int, double>> grid;
        for (int L : Ls)
            for (double v : params)
                grid.emplace_back(L, v);
        std::vector<std::vector<double>> values(grid.size());
        parallel_for(grid.size(), o.common.jobs, [&](std::size_t i) {
            const auto profile = make_profile(grid[i].first, kind, grid[i].second);
            warn_underflow(profile);
            const auto occ = occupied_orbitals(diagonalize(hopping_matrix_1d(profile)));
            values[i] = renyi_entropies(correlation_matrix(occ, leading_block(profile.L)), orders);
        });
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t k = 0; k < orders.size(); ++k)
                curve.push_back({grid[i].first, grid[i].second, orders[k], values[i][k]});
    }

    json fits = json::array();
    if (o.fit != "none") {
        if (o.blocks)
            throw UsageError("--fit applies to half-chain scans");
        const Abscissa abscissa = o.fit == "deformed" ? Abscissa::Deformed : Abscissa::Plain;
        for (double v : params)
            for (double n : orders) {
                EntropyCurve sel;
                for (const auto& p : curve)
                    if (p.param == v && p.order == n) {
                        // the deformed abscissa reads z from param
                        const double z = make_profile(p.length, kind, v).z;
                        sel.push_back({p.length, z, n, p.entropy});
                    }
                json f = to_json(fit_central_charge(sel, n, abscissa));
                fits.push_back({{kind, v}, {"n", n}, {"fit", f}});
            }
    }

    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        json pts = json::array();
        for (const auto& p : curve)
            pts.push_back({{o.blocks ? "l" : "L", p.length}, {kind, p.param}, {"n", p.order},
                           {"S", p.entropy}});
        doc["points"] = std::move(pts);
        if (!fits.empty())
            doc["fits"] = fits;
        emit_json(out, doc);
        return;
    }
    std::vector<std::string> extra;
    for (const auto& f : fits)
        extra.push_back("fit: " + f.dump());
    write_csv_header(out.stream(), ctx, extra);
    write_entropy_csv(out.stream(), curve, o.blocks ? "l" : "L", kind);
    out.finish();
}

// --------------------------------------------------------------- renyi-fit

struct RenyiFitOpts {
    Common common;
    std::string L, z;
    std::string orders = "1,2,3,4";
};

void run_renyi_fit(const RenyiFitOpts& o, const Context& ctx) {
    const auto Ls = cli::parse_int_range(o.L);
    const auto zs = cli::parse_double_range(o.z);
    const auto orders = orders_from(o.orders);
    const bool has_even = std::any_of(Ls.begin(), Ls.end(), [](int L) { return L % 2 == 0; });
    const bool has_odd = std::any_of(Ls.begin(), Ls.end(), [](int L) { return L % 2 != 0; });
    if (!has_even || !has_odd)
        throw UsageError("--L must contain both even and odd sizes for the (-1)^L term");
    if (std::set<int>(Ls.begin(), Ls.end()).size() < 6)
        throw UsageError("--L needs at least 6 distinct sizes");

    std::vector<double> all_z = zs;
    if (std::find(all_z.begin(), all_z.end(), 0.0) == all_z.end())
        all_z.insert(all_z.begin(), 0.0);
    const auto curve = halfchain_scan(Ls, all_z, orders, o.common.jobs);

    auto select = [&](double z, double n) {
        EntropyCurve sel;
        for (const auto& p : curve)
            if (p.param == z && p.order == n)
                sel.push_back(p);
        return sel;
    };

    struct Row {
        double z, n;
        FitResult fit;
        double d_pred, f_pred, f_ref;
    };
    std::vector<Row> rows;
    for (double n : orders) {
        const auto uniform = fit_renyi_halfchain(select(0.0, n), n);
        const double d0 = uniform.coeff("d_n");
        const double f0 = uniform.coeff("f_n");
        const double f_ref = fn_reference(static_cast<int>(n), uniform);
        for (double z : zs) {
            auto fit = fit_renyi_halfchain(select(z, n), n);
            rows.push_back({z, n, std::move(fit), dn_prediction(d0, n, z),
                            fn_prediction(std::abs(f0), n, z), f_ref});
        }
    }

    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        json list = json::array();
        for (const auto& r : rows)
            list.push_back({{"z", r.z},
                            {"n", r.n},
                            {"fit", to_json(r.fit)},
                            {"d_prediction", r.d_pred},
                            {"abs_f_prediction", r.f_pred},
                            {"f_reference", r.f_ref}});
        doc["fits"] = std::move(list);
        emit_json(out, doc);
        return;
    }
    write_csv_header(out.stream(), ctx);
    out.stream() << "z,n,c_n,d_n,f_n,d_prediction,abs_f_prediction,f_reference,chi2\n";
    for (const auto& r : rows)
        out.stream() << format_double(r.z) << ',' << format_double(r.n) << ','
                     << format_double(r.fit.coeff("c_n")) << ',' << format_double(r.fit.coeff("d_n"))
                     << ',' << format_double(r.fit.coeff("f_n")) << ',' << format_double(r.d_pred)
                     << ',' << format_double(r.f_pred) << ',' << format_double(r.f_ref) << ','
                     << format_double(r.fit.chi2) << '\n';
    out.finish();
}

// ------------------------------------------------------------- es-collapse

struct CollapseOpts {
    Common common;
    std::string L, z, summary;
    int window = kSpacingWindow;
};

void run_es_collapse(const CollapseOpts& o, const Context& ctx) {
    const auto Ls = cli::parse_int_range(o.L);
    const auto zs = cli::parse_double_range(o.z);
    for (int L : Ls)
        if (L % 2 != 0)
            throw UsageError("es-collapse uses even L only (half-odd p levels)");
    if (o.window < 2)
        throw UsageError("--window must be at least 2");

    std::vector<std::pair<int, double>> grid;
    for (int L : Ls)
        for (double z : zs)
            grid.emplace_back(L, z);
    std::vector<EntanglementSpectrum> spectra(grid.size());
    std::vector<double> entropy(grid.size());
    parallel_for(grid.size(), o.common.jobs, [&](std::size_t i) {
        const auto profile = profile_from_z(grid[i].first, grid[i].second);
        warn_underflow(profile);
        const auto occ = occupied_orbitals(diagonalize(hopping_matrix_1d(profile)));
        const auto C = correlation_matrix(occ, leading_block(profile.L));
        spectra[i] = entanglement_spectrum(C, o.window);
        entropy[i] = renyi_entropy(spectra[i].nu, 1.0);
    });

    if (!o.summary.empty()) {
        Output s(o.summary);
        write_csv_header(s.stream(), ctx);
        s.stream() << "L,z,S,delta_L,pi2_over_3delta_L\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            s.stream() << grid[i].first << ',' << format_double(grid[i].second) << ','
                       << format_double(entropy[i]) << ',' << format_double(spectra[i].delta_L)
                       << ','
                       << format_double(std::numbers::pi * std::numbers::pi /
                                        (3.0 * spectra[i].delta_L))
                       << '\n';
        s.finish();
    }

    const double two_pi2 = 2.0 * std::numbers::pi * std::numbers::pi;
    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        json list = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& es = spectra[i];
            json levels = json::array();
            const std::size_t n = es.eps.size();
            for (std::size_t k = 0; k < n; ++k) {
                const double p = static_cast<double>(k) - (static_cast<double>(n) - 1.0) / 2.0;
                levels.push_back({{"p", p},
                                  {"eps", json_or_null(es.eps[k])},
                                  {"eps_scaled", json_or_null(es.eps[k] * grid[i].second / two_pi2)}});
            }
            list.push_back({{"L", grid[i].first},
                            {"z", grid[i].second},
                            {"S", entropy[i]},
                            {"delta_L", json_or_null(es.delta_L)},
                            {"levels", std::move(levels)}});
        }
        doc["spectra"] = std::move(list);
        emit_json(out, doc);
        return;
    }
    write_csv_header(out.stream(), ctx);
    out.stream() << "L,z,p,nu,eps,eps_scaled\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& es = spectra[i];
        const std::size_t n = es.eps.size();
        for (std::size_t k = 0; k < n; ++k) {
            const double p = static_cast<double>(k) - (static_cast<double>(n) - 1.0) / 2.0;
            out.stream() << grid[i].first << ',' << format_double(grid[i].second) << ','
                         << format_double(p) << ',' << format_double(es.nu[k]) << ','
                         << format_double(es.eps[k]) << ','
                         << format_double(es.eps[k] * grid[i].second / two_pi2) << '\n';
        }
    }
    out.finish();
}

// -------------------------------------------------------------------- sdrg

struct SdrgOpts {
    Common common;
    GeometryFlags geometry;
    int L = 0;
    std::string couplings, arcs;
};

void run_sdrg(const SdrgOpts& o, const Context& ctx) {
    std::vector<double> couplings;
    bool geometry_given = o.geometry.opt_alpha->count() + o.geometry.opt_h->count() +
                              o.geometry.opt_z->count() > 0;
    if (!o.couplings.empty()) {
        if (geometry_given || o.L > 0)
            throw UsageError("--couplings excludes --L and the geometry flags");
        couplings = cli::parse_double_range(o.couplings);
    } else {
        if (o.L <= 0)
            throw UsageError("give --L with one of --alpha, --h, --z, or --couplings");
        const auto profile = make_profile(o.L, o.geometry.kind(), o.geometry.single());
        warn_underflow(profile);
        couplings = profile.couplings;
    }
    const int sites = static_cast<int>(couplings.size()) + 1;
    const auto bonds = sdrg_run(couplings);

    if (!o.arcs.empty()) {
        Output a(o.arcs);
        a.stream() << render_arcs(bonds, sites);
        a.finish();
    }
    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        doc["couplings"] = couplings;
        doc["result"] = to_json(bonds, sites);
        emit_json(out, doc);
        return;
    }
    write_csv_header(out.stream(), ctx);
    out.stream() << "left,right,sign\n";
    for (const auto& b : bonds.bonds)
        out.stream() << format_double(site_label(b.left, sites / 2)) << ','
                     << format_double(site_label(b.right, sites / 2)) << ',' << b.sign << '\n';
    out.finish();
}

// -------------------------------------------------------------- entropy-2d

struct Entropy2dOpts {
    Common common;
    std::string L = "8:24:2";
    std::string alpha = "1,0.9,0.75,0.5";
    std::string orders = "1";
    std::string policy = "staggered";
    std::string normalization = "side";
    std::string fits;
};

void run_entropy_2d(const Entropy2dOpts& o, const Context& ctx) {
    const auto Ls = cli::parse_int_range(o.L);
    const auto alphas = cli::parse_double_range(o.alpha);
    const auto orders = orders_from(o.orders);
    const FillingPolicy policy =
        o.policy == "strict" ? FillingPolicy::Strict : FillingPolicy::Staggered;
    const bool by_side = o.normalization == "side";
    const bool can_fit = std::set<int>(Ls.begin(), Ls.end()).size() >= 5;
    if (!o.fits.empty() && !can_fit)
        throw UsageError("--fits needs at least 5 distinct sizes");

    EntropyCurve curve;
    for (double alpha : alphas) {
        const auto part = lattice2d_scan(Ls, alpha, orders, policy, o.common.jobs);
        curve.insert(curve.end(), part.begin(), part.end());
    }
    auto length_of = [&](int L) { return by_side ? 2.0 * L : static_cast<double>(L); };

    struct Fit {
        double alpha, n;
        FitResult fit;
    };
    std::vector<Fit> fits;
    if (can_fit)
        for (double alpha : alphas)
            for (double n : orders) {
                std::vector<double> x, s;
                for (const auto& p : curve)
                    if (p.param == alpha && p.order == n) {
                        x.push_back(length_of(p.length));
                        s.push_back(p.entropy / length_of(p.length));
                    }
                fits.push_back({alpha, n, fit_2d(x, s)});
            }

    if (!o.fits.empty()) {
        Output f(o.fits);
        write_csv_header(f.stream(), ctx);
        f.stream() << "alpha,n,A,B,C,chi2\n";
        for (const auto& r : fits)
            f.stream() << format_double(r.alpha) << ',' << format_double(r.n) << ','
                       << format_double(r.fit.coeff("A")) << ',' << format_double(r.fit.coeff("B"))
                       << ',' << format_double(r.fit.coeff("C")) << ','
                       << format_double(r.fit.chi2) << '\n';
        f.finish();
    }

    Output out(o.common.out);
    if (o.common.format == "json") {
        json doc = json_document(ctx);
        json pts = json::array();
        for (const auto& p : curve)
            pts.push_back({{"L", p.length},
                           {"side", 2 * p.length},
                           {"alpha", p.param},
                           {"n", p.order},
                           {"S", p.entropy},
                           {"s", p.entropy / length_of(p.length)}});
        json fl = json::array();
        for (const auto& r : fits)
            fl.push_back({{"alpha", r.alpha}, {"n", r.n}, {"fit", to_json(r.fit)}});
        doc["points"] = std::move(pts);
        doc["fits"] = std::move(fl);
        emit_json(out, doc);
        return;
    }
    write_csv_header(out.stream(), ctx);
    out.stream() << "L,side,alpha,n,S,s\n";
    for (const auto& p : curve)
        out.stream() << p.length << ',' << 2 * p.length << ',' << format_double(p.param) << ','
                     << format_double(p.order) << ',' << format_double(p.entropy) << ','
                     << format_double(p.entropy / length_of(p.length)) << '\n';
    out.finish();
}

// ------------------------------------------------------------------ qubism

struct QubismOpts {
    Common common;
    GeometryFlags geometry;
    int sites = 0;
};

void run_qubism(const QubismOpts& o, const Context& ctx) {
    if (o.sites <= 0 || o.sites % 2 != 0)
        throw UsageError("--sites must be a positive even number");
    const auto profile = make_profile(o.sites / 2, o.geometry.kind(), o.geometry.single());
    warn_underflow(profile);
    const auto occ = occupied_orbitals(diagonalize(hopping_matrix_1d(profile)));
    const auto amps = slater_amplitudes(occ, o.sites);
    const auto image = render(amps);
    const std::string ppm = ppm_bytes(image);

    json report = json_document(ctx);
    report["profile"] = to_json(profile);
    report["side"] = image.side;
    report["nonzero_amplitudes"] = amps.nonzero_count();
    report["lit_pixels"] = lit_pixel_count(ppm);
    json ranks = json::array();
    for (int l = 1; l < o.sites; ++l)
        ranks.push_back({{"l", l}, {"schmidt_rank", schmidt_rank(amps, l)}});
    report["schmidt_ranks"] = std::move(ranks);

    if (o.common.format == "ppm") {
        Output out(o.common.out, true);
        out.stream() << ppm;
        out.finish();
        // the P6 header is fixed, so provenance goes to a sidecar file
        if (o.common.out != "-") {
            Output side(o.common.out + ".json");
            side.stream() << report.dump(2) << '\n';
            side.finish();
        }
        return;
    }
    Output out(o.common.out);
    if (o.common.format == "json") {
        json table = json::array();
        for (std::uint32_t c = 0; c < amps.size(); ++c)
            if (std::abs(amps.amplitudes[c]) > 1e-12)
                table.push_back({{"bitstring", amps.bitstring(c)}, {"amplitude", amps.amplitudes[c]}});
        report["amplitudes"] = std::move(table);
        emit_json(out, report);
        return;
    }
    write_csv_header(out.stream(), ctx, {"profile: " + to_json(profile).dump()});
    write_amplitudes_csv(out.stream(), amps);
    out.finish();
}

// ---------------------------------------------------------------- validate

bool run_validate(const Common& c, const Context& ctx) {
    const auto checks = run_validation_suite();
    bool ok = true;
    for (const auto& r : checks) {
        ok = ok && r.passed;
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << format_double(r.measured)
                  << " vs " << format_double(r.tolerance) << ")"
                  << (r.detail.empty() ? "" : " at " + r.detail) << '\n';
    }
    Output out(c.out);
    if (c.format == "json") {
        json doc = json_document(ctx);
        json list = json::array();
        for (const auto& r : checks)
            list.push_back({{"name", r.name},
                            {"passed", r.passed},
                            {"measured", r.measured},
                            {"tolerance", r.tolerance},
                            {"detail", r.detail}});
        doc["checks"] = std::move(list);
        doc["passed"] = ok;
        emit_json(out, doc);
        return ok;
    }
    write_csv_header(out.stream(), ctx);
    out.stream() << "check,passed,measured,tolerance\n";
    for (const auto& r : checks)
        out.stream() << '"' << r.name << "\"," << (r.passed ? 1 : 0) << ','
                     << format_double(r.measured) << ',' << format_double(r.tolerance) << '\n';
    out.finish();
    return ok;
}

void error_record(const std::string& kind, const std::string& command, const std::exception& e) {
    json j;
    j["error"] = {{"kind", kind}, {"command", command}, {"message", e.what()}};
    if (const auto* r = dynamic_cast<const RankDeficiencyError*>(&e))
        j["error"]["column"] = r->column();
    std::cerr << j.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for rainbow free-fermion chains and lattices"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", cli::tool_version());
    app.require_subcommand(1);

    SpectrumOpts spectrum;
    auto* s_spec = app.add_subcommand("spectrum", "Single-particle spectrum of a rainbow chain");
    s_spec->add_option("--L", spectrum.L, "Half-length L (2L sites)")->required()->check(CLI::PositiveNumber);
    add_geometry(s_spec, spectrum.geometry, "");
    add_output(s_spec, spectrum.common, {"csv", "json"});
    s_spec->add_option("--orbitals", spectrum.orbitals, "Also dump orbitals as little-endian float64");

    WavefunctionOpts wave;
    auto* s_wave = app.add_subcommand("wavefunction", "Analytic vs exact orbitals");
    s_wave->add_option("--L", wave.L, "Half-length L")->required()->check(CLI::PositiveNumber);
    add_geometry(s_wave, wave.geometry, "");
    s_wave->add_option("--m", wave.m, "Level indices relative to the Fermi point")->capture_default_str();
    s_wave->add_flag("--overlaps", wave.overlaps, "Overlap of every occupied orbital instead");
    add_output(s_wave, wave.common, {"csv", "json"});

    VelocityOpts velocity;
    auto* s_vel = app.add_subcommand("velocity-scan", "Fermi velocity a(z)");
    s_vel->add_option("--L", velocity.L, "Half-length L")->required()->check(CLI::Range(2, 1 << 20));
    s_vel->add_option("--z", velocity.z, "z values, start:stop:step")->required();
    add_jobs(s_vel, velocity.common);
    add_output(s_vel, velocity.common, {"csv", "json"});

    ValidityOpts validity;
    auto* s_val = app.add_subcommand("validity-map", "Continuum vs exact Slater overlaps");
    s_val->add_option("--L", validity.L, "Half-lengths, start:stop:step")->required();
    s_val->add_option("--z", validity.z, "z values, ascending")->required();
    s_val->add_option("--contours", validity.contours, "Write the 0.90/0.95 contour CSV here");
    add_jobs(s_val, validity.common);
    add_output(s_val, validity.common, {"csv", "json"});

    EntropyScanOpts escan;
    auto* s_es = app.add_subcommand("entropy-scan", "Half-chain or boundary-block entropies");
    s_es->add_option("--L", escan.L, "Half-lengths, start:stop:step")->required();
    add_geometry(s_es, escan.geometry, " (range allowed)");
    s_es->add_option("--orders", escan.orders, "Renyi orders")->capture_default_str();
    s_es->add_flag("--blocks", escan.blocks, "Scan blocks [0, l) of a single chain");
    s_es->add_option("--fit", escan.fit, "Central-charge fit per geometry value")->capture_default_str()
        ->check(CLI::IsMember({"none", "plain", "deformed"}));
    add_jobs(s_es, escan.common);
    add_output(s_es, escan.common, {"csv", "json"});

    RenyiFitOpts rfit;
    auto* s_rf = app.add_subcommand("renyi-fit", "c_n, d_n, f_n against z");
    s_rf->add_option("--L", rfit.L, "Half-lengths mixing both parities")->required();
    s_rf->add_option("--z", rfit.z, "z values")->required();
    s_rf->add_option("--orders", rfit.orders, "Renyi orders")->capture_default_str();
    add_jobs(s_rf, rfit.common);
    add_output(s_rf, rfit.common, {"csv", "json"});

    CollapseOpts collapse;
    auto* s_col = app.add_subcommand("es-collapse", "Scaled entanglement spectra");
    s_col->add_option("--L", collapse.L, "Even half-lengths")->required();
    s_col->add_option("--z", collapse.z, "z values")->required();
    s_col->add_option("--window", collapse.window, "Levels used for the spacing estimate")->capture_default_str();
    s_col->add_option("--summary", collapse.summary, "Write (L, z, S, delta_L) CSV here");
    add_jobs(s_col, collapse.common);
    add_output(s_col, collapse.common, {"csv", "json"});

    SdrgOpts sdrg;
    auto* s_sd = app.add_subcommand("sdrg", "Strong-disorder RG bond structure");
    s_sd->add_option("--L", sdrg.L, "Half-length L")->check(CLI::PositiveNumber);
    add_geometry(s_sd, sdrg.geometry, "");
    s_sd->add_option("--couplings", sdrg.couplings, "Explicit comma-separated couplings");
    s_sd->add_option("--arcs", sdrg.arcs, "Write an ASCII arc diagram here");
    add_output(s_sd, sdrg.common, {"json", "csv"});

    Entropy2dOpts e2d;
    auto* s_2d = app.add_subcommand("entropy-2d", "Left-half entropies of the 2D lattice");
    s_2d->add_option("--L", e2d.L, "Half-sides (lattice is 2L x 2L)")->capture_default_str();
    s_2d->add_option("--alpha", e2d.alpha, "alpha values")->capture_default_str();
    s_2d->add_option("--orders", e2d.orders, "Renyi orders")->capture_default_str();
    s_2d->add_option("--policy", e2d.policy, "Zero-mode filling policy")->capture_default_str()
        ->check(CLI::IsMember({"strict", "staggered"}));
    s_2d->add_option("--normalization", e2d.normalization,
                     "Divide by the lattice side 2L or by L")->capture_default_str()
        ->check(CLI::IsMember({"side", "half"}));
    s_2d->add_option("--fits", e2d.fits, "Write (alpha, n, A, B, C) CSV here");
    add_jobs(s_2d, e2d.common);
    add_output(s_2d, e2d.common, {"csv", "json"});

    QubismOpts qubism;
    auto* s_q = app.add_subcommand("qubism", "Qubism image and Schmidt ranks");
    s_q->add_option("--sites", qubism.sites, "Number of sites 2L (<= 14)")->required();
    add_geometry(s_q, qubism.geometry, "");
    add_output(s_q, qubism.common, {"ppm", "csv", "json"});

    Common validate;
    auto* s_v = app.add_subcommand("validate", "Oracle-equivalence and invariant checks");
    add_output(s_v, validate, {"csv", "json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const Context ctx{sub->get_name(), config_echo(*sub)};
    const std::map<std::string, std::function<bool()>> table{
        {"spectrum", [&] { return run_spectrum(spectrum, ctx), true; }},
        {"wavefunction", [&] { return run_wavefunction(wave, ctx), true; }},
        {"velocity-scan", [&] { return run_velocity(velocity, ctx), true; }},
        {"validity-map", [&] { return run_validity(validity, ctx), true; }},
        {"entropy-scan", [&] { return run_entropy_scan(escan, ctx), true; }},
        {"renyi-fit", [&] { return run_renyi_fit(rfit, ctx), true; }},
        {"es-collapse", [&] { return run_es_collapse(collapse, ctx), true; }},
        {"sdrg", [&] { return run_sdrg(sdrg, ctx), true; }},
        {"entropy-2d", [&] { return run_entropy_2d(e2d, ctx), true; }},
        {"qubism", [&] { return run_qubism(qubism, ctx), true; }},
        {"validate", [&] { return run_validate(validate, ctx); }},
    };

    try {
        return table.at(ctx.command)() ? kOk : kFailure;
    } catch (const UsageError& e) {
        error_record("usage", ctx.command, e);
        return kUsage;
    } catch (const DomainError& e) {
        error_record("domain", ctx.command, e);
        return kUsage;
    } catch (const ContractViolation& e) {
        error_record("contract", ctx.command, e);
        return kUsage;
    } catch (const ResourceError& e) {
        error_record("resource", ctx.command, e);
        return kUsage;
    } catch (const NumericError& e) {
        error_record("numeric", ctx.command, e);
        return kNumeric;
    } catch (const std::exception& e) {
        error_record("io", ctx.command, e);
        return kFailure;
    }
}
