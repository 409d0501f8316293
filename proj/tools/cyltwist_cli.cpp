// Command-line front end: exact counting, censuses, enumeration, flip
// components, twist evaluation, connectivity searches with certificates,
// growth constants, the thin-rectangle homomorphism and regularity runs.
//
// Exit codes: 0 = definite result, 1 = input error, 2 = unknown
// (search budget exhausted on a semi-decidable question).

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cyltwist/counting.hpp"
#include "cyltwist/groups.hpp"
#include "cyltwist/moves.hpp"
#include "cyltwist/phi.hpp"
#include "cyltwist/tropical.hpp"

using namespace cyltwist;

namespace {

constexpr int EXIT_UNKNOWN = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

DiskPtr load_disk(const std::string& path) { return parse_disk(slurp(path)); }

CylinderTiling load_tiling(const std::string& path) { return parse_tiling(slurp(path)); }

UAxis axis_of(const std::string& name) {
    if (name == "e1") return axis_e1();
    if (name == "e2") return axis_e2();
    throw std::invalid_argument("axis must be e1 or e2");
}

struct CommonOpts {
    std::size_t state_budget = 2000000;
    // searches are budgeted by states so equal inputs give byte-identical
    // reports; the time budget is a safety net, off by default
    double time_budget = 1e9;
    int threads = 1;
    std::string report = "text";
    SearchLimits limits() const { return SearchLimits{state_budget, time_budget}; }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--state-budget", c.state_budget, "max states for searches/enumeration");
    cmd->add_option("--time-budget", c.time_budget, "max seconds per search");
    cmd->add_option("--threads", c.threads, "worker threads (results are deterministic)");
    cmd->add_option("--report", c.report)->check(CLI::IsMember({"text", "structured"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact 3D domino tiling engine for cylinders over quadriculated disks"};
    app.require_subcommand(1);

    std::string disk_path, tiling_path, tiling_path2, out_path;
    int n = 2;
    int max_pad = 8;
    std::string axis_name = "e2";
    std::size_t limit = 0;
    CommonOpts common;

    auto* validate = app.add_subcommand("validate", "parse a disk file and report its flags");
    validate->add_option("disk", disk_path)->required();

    auto* count = app.add_subcommand("count", "count tilings of disk x [0,N]");
    count->add_option("disk", disk_path)->required();
    count->add_option("--n", n)->required();
    add_common(count, common);

    auto* census = app.add_subcommand("census", "twist-weighted census of disk x [0,N]");
    census->add_option("disk", disk_path)->required();
    census->add_option("--n", n)->required();
    add_common(census, common);

    auto* enumerate = app.add_subcommand("enumerate", "list all tilings of disk x [0,N]");
    enumerate->add_option("disk", disk_path)->required();
    enumerate->add_option("--n", n)->required();
    enumerate->add_option("--limit", limit, "print at most this many tilings (0 = all)");
    add_common(enumerate, common);

    auto* components = app.add_subcommand("components", "flip components grouped by twist");
    components->add_option("disk", disk_path)->required();
    components->add_option("--n", n)->required();
    add_common(components, common);

    auto* twist_cmd = app.add_subcommand("twist", "twist of a cylinder tiling file");
    twist_cmd->add_option("tiling", tiling_path)->required();

    auto* connect = app.add_subcommand("connect", "search a flip path between two tilings");
    connect->add_option("tiling0", tiling_path)->required();
    connect->add_option("tiling1", tiling_path2)->required();
    connect->add_option("--out", out_path, "certificate file");
    add_common(connect, common);

    auto* sim = app.add_subcommand("sim", "decide equivalence up to vertical padding");
    sim->add_option("tiling0", tiling_path)->required();
    sim->add_option("tiling1", tiling_path2)->required();
    sim->add_option("--maxpad", max_pad);
    sim->add_option("--out", out_path, "certificate file");
    add_common(sim, common);

    auto* render = app.add_subcommand("render", "pretty-print a tiling file by floors");
    render->add_option("tiling", tiling_path)->required();

    int cert_n = 4;
    auto* cd = app.add_subcommand("cd", "tropical growth constant with witness and bound");
    cd->add_option("disk", disk_path)->required();
    cd->add_option("--n", cert_n, "height of the conjugated-power upper bound");
    cd->add_option("--out", out_path, "witness tiling file");
    add_common(cd, common);

    auto* phi_cmd = app.add_subcommand("phi", "thin-rectangle homomorphism value of a tiling");
    phi_cmd->add_option("tiling", tiling_path)->required();

    auto* cells = app.add_subcommand("cells", "enumerate 2-cells of the plug complex");
    cells->add_option("disk", disk_path)->required();
    add_common(cells, common);

    auto* regularity = app.add_subcommand("regularity", "certified regularity check");
    regularity->add_option("disk", disk_path)->required();
    regularity->add_option("--maxpad", max_pad);
    regularity->add_option("--out", out_path, "certificate bundle file");
    add_common(regularity, common);

    std::string u_flag = "e2";
    twist_cmd->add_option("--u", u_flag, "shade axis for the per-axis report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            DiskPtr d = load_disk(disk_path);
            std::cout << "squares " << d->size() << "\n";
            std::cout << "black " << d->black_count << " white " << d->white_count << "\n";
            std::cout << "balanced " << (d->balanced ? "yes" : "no") << "\n";
            std::cout << "nontrivial " << (d->nontrivial ? "yes" : "no") << "\n";
            std::cout << "disk " << (d->is_disk ? "yes" : "no") << "\n";
            std::cout << "tileable " << (count_planar_tilings(*d, 0) > 0 ? "yes" : "no") << "\n";
            return 0;
        }
        if (*count) {
            TransferGraph g = build_transfer_graph(load_disk(disk_path));
            std::cout << count_tilings(g, n).to_decimal() << "\n";
            return 0;
        }
        if (*census) {
            TransferGraph g = build_transfer_graph(load_disk(disk_path));
            TwistPolynomial p = twist_census(g, n);
            for (auto& [t, c] : p.integer_coefficients())
                std::cout << t << " " << c.to_decimal() << "\n";
            return 0;
        }
        if (*enumerate) {
            TransferGraph g = build_transfer_graph(load_disk(disk_path));
            std::size_t printed = 0;
            enumerate_tilings(g, n, common.state_budget, [&](const CylinderTiling& t) {
                if (limit && printed >= limit) return;
                if (printed) std::cout << "%\n";
                std::cout << serialize_tiling(t);
                ++printed;
            });
            return 0;
        }
        if (*components) {
            TransferGraph g = build_transfer_graph(load_disk(disk_path));
            FlipComponents fc = flip_components(g, n, common.state_budget);
            std::cout << "tilings " << fc.tiling_count << "\n";
            std::cout << "components " << fc.component_count << "\n";
            for (auto& [t, sizes] : fc.sizes) {
                std::cout << "twist " << t << " sizes";
                for (auto s : sizes) std::cout << " " << s;
                std::cout << "\n";
            }
            return 0;
        }
        if (*twist_cmd) {
            CylinderTiling t = load_tiling(tiling_path);
            std::cout << "e1 " << twist(t, axis_e1()) << "\n";
            std::cout << "e2 " << twist(t, axis_e2()) << "\n";
            (void)axis_of(u_flag);
            return 0;
        }
        if (*connect) {
            CylinderTiling t0 = load_tiling(tiling_path), t1 = load_tiling(tiling_path2);
            auto tr = flip_connect(t0, t1, common.limits());
            if (!tr) {
                std::cout << "UNKNOWN\n";
                return EXIT_UNKNOWN;
            }
            std::cout << "CONNECTED flips " << tr->moves.size() << "\n";
            if (!out_path.empty()) spit(out_path, tr->to_text());
            return 0;
        }
        if (*sim) {
            CylinderTiling t0 = load_tiling(tiling_path), t1 = load_tiling(tiling_path2);
            SimResult r = sim_connect(t0, t1, max_pad, common.limits());
            switch (r.status) {
                case SimStatus::Proven:
                    std::cout << "SIM pad " << r.trace->pad << " flips " << r.trace->moves.size()
                              << "\n";
                    if (!out_path.empty()) spit(out_path, r.trace->to_text());
                    return 0;
                case SimStatus::NotSimParity:
                    std::cout << "NOT-SIM (parity)\n";
                    return 0;
                case SimStatus::NotSimTwist:
                    std::cout << "NOT-SIM (twist)\n";
                    return 0;
                case SimStatus::NotSimPhi:
                    std::cout << "NOT-SIM (phi)\n";
                    return 0;
                default:
                    std::cout << "UNKNOWN\n";
                    return EXIT_UNKNOWN;
            }
        }
        if (*render) {
            std::cout << render_tiling(load_tiling(tiling_path));
            return 0;
        }
        if (*cd) {
            DiskPtr d = load_disk(disk_path);
            TropicalGraph g = build_tropical_graph(build_transfer_graph(d));
            MeanCycle c = max_cycle_mean(g);
            Rational mean = c.mean_twist();
            QuarterInt tw(c.num4);
            std::cout << "c " << mean.str() << "\n";
            std::cout << "witness length " << c.len << " twist " << tw.str() << "\n";
            Rational m = upper_bound_certificate(g, cert_n, c.potentials_num, c.potential_scale);
            std::cout << "bound N " << cert_n << " m " << m.str() << "\n";
            if (!out_path.empty()) spit(out_path, serialize_tiling(witness_tiling(g, c)));
            return 0;
        }
        if (*phi_cmd) {
            std::cout << phi(load_tiling(tiling_path)).str() << "\n";
            return 0;
        }
        if (*cells) {
            CellReport rep = cell_boundary_check(load_disk(disk_path));
            std::cout << "loop-cells " << rep.loop_cells << "\n";
            std::cout << "bigons " << rep.bigons << "\n";
            std::cout << "quads " << rep.quads << "\n";
            if (rep.phi_checked) std::cout << "phi-violations " << rep.phi_violations << "\n";
            std::size_t isolated = 0;
            for (auto& [key, cnt] : rep.floor_membership)
                if (cnt == 0) ++isolated;
            std::cout << "floors-on-cells " << rep.floor_membership.size() << "\n";
            return 0;
        }
        if (*regularity) {
            DiskPtr d = load_disk(disk_path);
            RegularityOptions opts;
            opts.max_pad = max_pad;
            opts.limits = common.limits();
            RegularityReport rep = regularity_check(d, opts);
            std::cout << "commute " << (rep.commute_ok ? "proven" : "pending") << "\n";
            std::string bundle;
            for (auto& c : rep.cases) {
                std::cout << "case domino " << c.dom_a << "-" << c.dom_b << " flux "
                          << c.flux_value.str() << " k " << c.k << " ";
                switch (c.status) {
                    case RegularityCase::Proven: std::cout << "proven " << c.detail; break;
                    case RegularityCase::Disproven: std::cout << "disproven " << c.detail; break;
                    default: std::cout << "pending";
                }
                std::cout << "\n";
                if (c.certificate) bundle += c.certificate->to_text() + "%\n";
            }
            std::cout << "verdict " << rep.summary() << "\n";
            if (!out_path.empty()) spit(out_path, bundle);
            return rep.verdict == RegularityReport::Inconclusive ? EXIT_UNKNOWN : 0;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return EXIT_UNKNOWN;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
