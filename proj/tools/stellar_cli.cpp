// Command-line front end: build states, compute stellar-fidelity profiles,
// derive conversion no-go regions, assess protocol points, and compute
// Wigner logarithmic negativities. All outputs are deterministic JSON/CSV.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stellar/conversion.hpp"
#include "stellar/serialize.hpp"
#include "stellar/state_zoo.hpp"
#include "stellar/wigner.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace stellar;

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw spec_error("cannot open output file: " + path);
    f << text;
}

cplx parse_complex(const std::string& s) {
    std::istringstream is(s);
    double re = 0.0, im = 0.0;
    char sep = 0;
    if (!(is >> re)) throw spec_error("cannot parse complex value: " + s);
    if (is >> sep) {
        if (sep != ',' || !(is >> im))
            throw spec_error("cannot parse complex value: " + s);
    }
    return {re, im};
}

/// Spec strings: fock:N | coherent:RE[,IM] | cat:ALPHA[:even|odd] |
/// gkp:DELTA | trisqueezed:T | cubic:C[,R]
StateSpec parse_spec(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    StateSpec spec;
    const std::string& fam = parts[0];
    auto need = [&](std::size_t k) {
        if (parts.size() < k + 1)
            throw spec_error("state spec '" + s + "' is missing a parameter");
        return parts[k];
    };
    if (fam == "fock") {
        spec.family = "fock";
        spec.fock_n = std::stoi(need(1));
    } else if (fam == "coherent") {
        spec.family = "coherent";
        spec.alpha = parse_complex(need(1));
    } else if (fam == "cat") {
        spec.family = "cat";
        spec.alpha = std::stod(need(1));
        const std::string par = parts.size() > 2 ? parts[2] : "odd";
        if (par == "odd")
            spec.parity = -1;
        else if (par == "even")
            spec.parity = 1;
        else
            throw spec_error("cat parity must be 'even' or 'odd'");
    } else if (fam == "gkp") {
        spec.family = "gkp";
        spec.delta = std::stod(need(1));
    } else if (fam == "trisqueezed") {
        spec.family = "trisqueezed";
        spec.t = parse_complex(need(1));
    } else if (fam == "cubic") {
        spec.family = "cubic_phase";
        const cplx cr = parse_complex(need(1));
        spec.cubicity = cr.real();
        spec.r = cr.imag();
    } else {
        throw spec_error("unknown state family: " + fam);
    }
    return spec;
}

struct LoadedState {
    FockState state;
    std::string id;
};

LoadedState load_state(const std::string& arg, int cutoff_override, int copies) {
    FockState psi = [&] {
        if (std::filesystem::exists(arg)) {
            std::ifstream f(arg);
            json j;
            f >> j;
            FockState s = state_from_json(j);
            if (cutoff_override > 0 && cutoff_override != s.cutoff())
                s = s.with_cutoff(cutoff_override);
            return s;
        }
        StateSpec spec = parse_spec(arg);
        if (cutoff_override > 0) spec.cutoff_override = cutoff_override;
        return spec.build();
    }();
    if (copies > 1) psi = tensor_power(psi, copies);
    std::string id = arg;
    if (copies > 1) id += "^" + std::to_string(copies);
    return {std::move(psi), std::move(id)};
}

json run_metadata(const json& config) {
    return json{{"version", kVersion}, {"config", config}};
}

void emit(const json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
}

std::string sibling_csv_path(const std::string& out) {
    std::filesystem::path p(out);
    p.replace_extension(".csv");
    return p.string();
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Stellar-fidelity profiles and Gaussian-conversion no-go bounds"};
    app.require_subcommand(1);

    // --- state ---
    auto* cmd_state = app.add_subcommand("state", "Build a state and write its Fock amplitudes");
    int st_fock = -1, st_copies = 1, st_cutoff = 0, st_logical = 0;
    std::string st_coherent, st_parity = "odd", st_tris, st_cubic, st_out;
    double st_cat = -1.0, st_gkp = -1.0;
    cmd_state->add_option("--fock", st_fock, "Fock state |n>");
    cmd_state->add_option("--coherent", st_coherent, "coherent state, 're[,im]'");
    cmd_state->add_option("--cat", st_cat, "cat state amplitude alpha");
    cmd_state->add_option("--parity", st_parity, "cat parity: even|odd")
        ->check(CLI::IsMember({"even", "odd"}));
    cmd_state->add_option("--gkp", st_gkp, "finite-energy grid state, envelope width delta");
    cmd_state->add_option("--logical", st_logical, "grid-state logical value");
    cmd_state->add_option("--trisqueezed", st_tris, "trisqueezed state, triplicity 're[,im]'");
    cmd_state->add_option("--cubic", st_cubic, "cubic-phase state, 'cubicity[,squeezing]'");
    cmd_state->add_option("--copies", st_copies, "tensor copies")->check(CLI::PositiveNumber);
    cmd_state->add_option("--cutoff", st_cutoff, "Fock cutoff override");
    cmd_state->add_option("--out", st_out, "output path (default stdout)");

    // --- profile ---
    auto* cmd_profile = app.add_subcommand("profile", "Compute a stellar-fidelity profile");
    std::string pr_state, pr_out, pr_format = "json";
    int pr_nmax = 0, pr_starts = 0, pr_cutoff = 0, pr_copies = 1;
    std::uint64_t pr_seed = 0;
    cmd_profile->add_option("--state", pr_state, "state spec or state JSON file")->required();
    cmd_profile->add_option("--n-max", pr_nmax, "profile cap N")->required()
        ->check(CLI::NonNegativeNumber);
    cmd_profile->add_option("--seed", pr_seed, "RNG seed (required for reproducibility)")
        ->required();
    cmd_profile->add_option("--starts", pr_starts, "optimizer multi-starts (0 = auto)");
    cmd_profile->add_option("--cutoff", pr_cutoff, "Fock cutoff override");
    cmd_profile->add_option("--copies", pr_copies, "tensor copies of the input state")
        ->check(CLI::PositiveNumber);
    cmd_profile->add_option("--out", pr_out, "output path (default stdout)");
    cmd_profile->add_option("--format", pr_format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));

    // --- nogo ---
    auto* cmd_nogo = app.add_subcommand("nogo", "Derive a conversion no-go region");
    std::string ng_in, ng_target, ng_flavor = "multicopy", ng_purity = "pure", ng_out,
                ng_format = "json";
    int ng_copies = 1;
    cmd_nogo->add_option("--input", ng_in, "input-state profile JSON")->required();
    cmd_nogo->add_option("--target", ng_target, "target-state profile JSON")->required();
    cmd_nogo->add_option("--flavor", ng_flavor, "multicopy|subadditive")
        ->check(CLI::IsMember({"multicopy", "subadditive"}));
    cmd_nogo->add_option("--copies", ng_copies,
                         "input copies k (sub-additive flavor)")
        ->check(CLI::PositiveNumber);
    cmd_nogo->add_option("--purity", ng_purity, "pure|mixed")
        ->check(CLI::IsMember({"pure", "mixed"}));
    cmd_nogo->add_option("--out", ng_out, "output path (default stdout)");
    cmd_nogo->add_option("--format", ng_format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));

    // --- assess ---
    auto* cmd_assess = app.add_subcommand("assess", "Place a protocol point against a region");
    std::string as_region, as_out;
    double as_p = 0.0, as_f = 0.0;
    cmd_assess->add_option("--region", as_region, "region JSON file")->required();
    cmd_assess->add_option("--p", as_p, "success probability")->required();
    cmd_assess->add_option("--fidelity", as_f, "achieved fidelity")->required();
    cmd_assess->add_option("--out", as_out, "output path (default stdout)");

    // --- wln ---
    auto* cmd_wln = app.add_subcommand("wln", "Wigner logarithmic negativity");
    std::vector<std::string> wl_states;
    std::string wl_out, wl_grid_out;
    int wl_cutoff = 0, wl_resolution = 801;
    cmd_wln->add_option("--state", wl_states,
                        "state spec or file; repeat for a product of modes")
        ->required();
    cmd_wln->add_option("--cutoff", wl_cutoff, "Fock cutoff override");
    cmd_wln->add_option("--resolution", wl_resolution, "grid points per axis (odd)");
    cmd_wln->add_option("--grid-out", wl_grid_out, "dump the (single-state) grid as CSV");
    cmd_wln->add_option("--out", wl_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (cmd_state->parsed()) {
        StateSpec spec;
        int chosen = 0;
        if (st_fock >= 0) {
            spec.family = "fock";
            spec.fock_n = st_fock;
            ++chosen;
        }
        if (!st_coherent.empty()) {
            spec.family = "coherent";
            spec.alpha = parse_complex(st_coherent);
            ++chosen;
        }
        if (st_cat >= 0.0) {
            spec.family = "cat";
            spec.alpha = st_cat;
            spec.parity = st_parity == "odd" ? -1 : 1;
            ++chosen;
        }
        if (st_gkp >= 0.0) {
            spec.family = "gkp";
            spec.delta = st_gkp;
            spec.logical = st_logical;
            ++chosen;
        }
        if (!st_tris.empty()) {
            spec.family = "trisqueezed";
            spec.t = parse_complex(st_tris);
            ++chosen;
        }
        if (!st_cubic.empty()) {
            spec.family = "cubic_phase";
            const cplx cr = parse_complex(st_cubic);
            spec.cubicity = cr.real();
            spec.r = cr.imag();
            ++chosen;
        }
        if (chosen != 1)
            throw spec_error("state: give exactly one of --fock/--coherent/--cat/--gkp/"
                             "--trisqueezed/--cubic");
        if (st_cutoff > 0) spec.cutoff_override = st_cutoff;
        FockState psi = spec.build();
        if (st_copies > 1) psi = tensor_power(psi, st_copies);
        json j = state_to_json(psi);
        j["meta"] = run_metadata(json{{"family", spec.family}, {"copies", st_copies}});
        emit(j, st_out);
        return 0;
    }

    if (cmd_profile->parsed()) {
        LoadedState in = load_state(pr_state, pr_cutoff, pr_copies);
        ProfileOptions opts;
        opts.seed = pr_seed;
        opts.starts = pr_starts;
        StellarProfile p = profile(in.state, pr_nmax, opts);
        p.state_id = in.id;
        json j = profile_to_json(p);
        j["meta"] = run_metadata(json{{"state", pr_state},
                                      {"copies", pr_copies},
                                      {"cutoff", pr_cutoff},
                                      {"format", pr_format}});
        const std::string csv = profile_csv(p);
        if (pr_format == "csv") {
            if (pr_out.empty())
                std::cout << csv;
            else
                write_text(pr_out, csv);
        } else {
            emit(j, pr_out);
            if (pr_format == "both") {
                if (pr_out.empty())
                    std::cout << csv;
                else
                    write_text(sibling_csv_path(pr_out), csv);
            }
        }
        return 0;
    }

    if (cmd_nogo->parsed()) {
        auto load_profile = [](const std::string& path) {
            std::ifstream f(path);
            if (!f) throw spec_error("cannot open profile file: " + path);
            json j;
            f >> j;
            return profile_from_json(j);
        };
        StellarProfile in = load_profile(ng_in);
        StellarProfile target = load_profile(ng_target);
        const Purity purity = ng_purity == "pure" ? Purity::pure : Purity::mixed;
        NoGoRegion region = ng_flavor == "multicopy"
                                ? nogo_region_multicopy(in, target, purity)
                                : nogo_region_subadditive(in, ng_copies, target, purity);
        region.scenario.input_id = in.state_id;
        region.scenario.target_id = target.state_id;
        if (ng_flavor == "subadditive") region.scenario.input_copies = ng_copies;
        json j = region_to_json(region, {ng_in, ng_target});
        j["meta"] = run_metadata(json{{"flavor", ng_flavor},
                                      {"copies", ng_copies},
                                      {"purity", ng_purity},
                                      {"format", ng_format}});
        const std::string csv = boundary_csv(region);
        if (ng_format == "csv") {
            if (ng_out.empty())
                std::cout << csv;
            else
                write_text(ng_out, csv);
        } else {
            emit(j, ng_out);
            if (ng_format == "both") {
                if (ng_out.empty())
                    std::cout << csv;
                else
                    write_text(sibling_csv_path(ng_out), csv);
            }
        }
        return 0;
    }

    if (cmd_assess->parsed()) {
        std::ifstream f(as_region);
        if (!f) throw spec_error("cannot open region file: " + as_region);
        json jr;
        f >> jr;
        NoGoRegion region = region_from_json(jr);
        AssessResult res = assess_protocol(region, as_p, as_f);
        json j{{"p", as_p},
               {"fidelity", as_f},
               {"delta", res.delta},
               {"delta_boundary", res.delta_boundary},
               {"delta_margin", res.delta_margin},
               {"p_margin", std::isfinite(res.p_margin) ? json(res.p_margin) : json()},
               {"verdict", res.inside_nogo ? "inside-no-go" : "outside"}};
        j["meta"] = run_metadata(json{{"region", as_region}});
        emit(j, as_out);
        return 0;
    }

    if (cmd_wln->parsed()) {
        WignerOptions wopts;
        wopts.resolution = wl_resolution;
        double total = 0.0;
        json mode_values = json::array();
        for (const std::string& s : wl_states) {
            LoadedState st = load_state(s, wl_cutoff, 1);
            const double w = wln(st.state, wopts);
            total += w;
            mode_values.push_back(json{{"state", st.id}, {"wln", w}});
        }
        if (!wl_grid_out.empty()) {
            if (wl_states.size() != 1)
                throw spec_error("--grid-out needs exactly one state");
            WignerGrid g = wigner(load_state(wl_states[0], wl_cutoff, 1).state, wopts);
            std::string csv = "x,p,w\n";
            for (int i = 0; i < g.resolution; ++i)
                for (int k = 0; k < g.resolution; ++k)
                    csv += format_double(-g.extent + g.step() * i) + "," +
                           format_double(-g.extent + g.step() * k) + "," +
                           format_double(g.values(i, k)) + "\n";
            write_text(wl_grid_out, csv);
        }
        json j{{"wln", total},
               {"modes", std::move(mode_values)},
               {"grid", json{{"resolution", wopts.resolution}}}};
        j["meta"] = run_metadata(json{{"states", wl_states}, {"cutoff", wl_cutoff}});
        emit(j, wl_out);
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const stellar::infeasible_error& e) {
        std::cerr << "error (infeasible optimization): " << e.what() << "\n";
        return 4;
    } catch (const stellar::truncation_error& e) {
        std::cerr << "error (truncation quality): " << e.what() << "\n";
        return 3;
    } catch (const stellar::precision_error& e) {
        std::cerr << "error (precision): " << e.what() << "\n";
        return 3;
    } catch (const stellar::degenerate_error& e) {
        std::cerr << "error (degenerate state): " << e.what() << "\n";
        return 3;
    } catch (const stellar::capacity_error& e) {
        std::cerr << "error (capacity): " << e.what() << "\n";
        return 3;
    } catch (const stellar::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
