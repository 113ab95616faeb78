#ifndef STELLAR_SERIALIZE_HPP
#define STELLAR_SERIALIZE_HPP

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "stellar/conversion.hpp"
#include "stellar/errors.hpp"
#include "stellar/fock_state.hpp"
#include "stellar/gaussian.hpp"
#include "stellar/profile.hpp"

namespace stellar {

using json = nlohmann::json;

namespace detail {

inline json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw spec_error("expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace detail

inline json state_to_json(const FockState& psi) {
    json amps = json::array();
    for (const cplx& a : psi.amps()) amps.push_back(detail::complex_to_json(a));
    return json{{"modes", psi.modes()}, {"cutoff", psi.cutoff()}, {"amps", std::move(amps)}};
}

inline FockState state_from_json(const json& j) {
    if (!j.contains("modes") || !j.contains("cutoff") || !j.contains("amps"))
        throw spec_error("state JSON requires modes, cutoff, amps");
    const int modes = j["modes"].get<int>(), cutoff = j["cutoff"].get<int>();
    std::vector<cplx> amps;
    for (const json& a : j["amps"]) amps.push_back(detail::complex_from_json(a));
    return FockState(modes, cutoff, std::move(amps));
}

inline json circuit_to_json(const GaussianCircuit& g) {
    json alphas = json::array();
    for (const cplx& a : g.alphas) alphas.push_back(detail::complex_to_json(a));
    return json{{"modes", g.modes},
                {"passive", g.passive},
                {"alphas", std::move(alphas)},
                {"rs", g.rs},
                {"mesh", GaussianCircuit::mesh_id}};
}

inline GaussianCircuit circuit_from_json(const json& j) {
    GaussianCircuit g;
    g.modes = j.at("modes").get<int>();
    g.passive = j.at("passive").get<std::vector<double>>();
    for (const json& a : j.at("alphas")) g.alphas.push_back(detail::complex_from_json(a));
    g.rs = j.at("rs").get<std::vector<double>>();
    if (j.contains("mesh") && j["mesh"].get<std::string>() != GaussianCircuit::mesh_id)
        throw spec_error("circuit JSON uses an unknown passive-mesh layout");
    g.validate();
    return g;
}

inline json opts_to_json(const ProfileOptions& o) {
    return json{{"seed", o.seed},           {"starts", o.starts},
                {"cutoff", o.cutoff},       {"nm_tol", o.nm_tol},
                {"nm_max_evals", o.nm_max_evals}, {"threads", o.threads},
                {"r_range", o.r_range},     {"alpha_range", o.alpha_range}};
}

inline ProfileOptions opts_from_json(const json& j) {
    ProfileOptions o;
    o.seed = j.at("seed").get<std::uint64_t>();
    o.starts = j.value("starts", o.starts);
    o.cutoff = j.value("cutoff", o.cutoff);
    o.nm_tol = j.value("nm_tol", o.nm_tol);
    o.nm_max_evals = j.value("nm_max_evals", o.nm_max_evals);
    o.threads = j.value("threads", o.threads);
    o.r_range = j.value("r_range", o.r_range);
    o.alpha_range = j.value("alpha_range", o.alpha_range);
    return o;
}

inline json profile_to_json(const StellarProfile& p) {
    json entries = json::array();
    for (const FidelityResult& e : p.entries)
        entries.push_back(json{{"best", circuit_to_json(e.best)},
                               {"spread", e.spread},
                               {"starts", e.starts_used},
                               {"escalations", e.escalations},
                               {"cutoff", e.cutoff}});
    return json{{"state", p.state_id},
                {"n_max", p.n_max},
                {"values", p.values},
                {"flags", std::vector<bool>(p.flags.begin(), p.flags.end())},
                {"seed", p.seed},
                {"opts", opts_to_json(p.opts)},
                {"entries", std::move(entries)}};
}

inline StellarProfile profile_from_json(const json& j) {
    StellarProfile p;
    p.state_id = j.at("state").get<std::string>();
    p.n_max = j.at("n_max").get<int>();
    p.values = j.at("values").get<std::vector<double>>();
    for (bool f : j.at("flags").get<std::vector<bool>>()) p.flags.push_back(f);
    p.seed = j.at("seed").get<std::uint64_t>();
    p.opts = opts_from_json(j.at("opts"));
    if (j.contains("entries"))
        for (const json& e : j["entries"]) {
            FidelityResult r;
            r.best = circuit_from_json(e.at("best"));
            r.spread = e.at("spread").get<double>();
            r.starts_used = e.at("starts").get<int>();
            r.escalations = e.at("escalations").get<int>();
            r.cutoff = e.at("cutoff").get<int>();
            r.value = p.values[p.entries.size()];
            r.flagged = p.flags[p.entries.size()];
            p.entries.push_back(std::move(r));
        }
    return p;
}

inline json scenario_to_json(const ConversionScenario& s) {
    return json{{"input", s.input_id},
                {"target", s.target_id},
                {"input_copies", s.input_copies},
                {"target_copies", s.target_copies},
                {"flavor", s.flavor == ConversionFlavor::multicopy ? "multicopy" : "subadditive"},
                {"purity", s.purity == Purity::pure ? "pure" : "mixed"}};
}

inline ConversionScenario scenario_from_json(const json& j) {
    ConversionScenario s;
    s.input_id = j.value("input", "");
    s.target_id = j.value("target", "");
    s.input_copies = j.value("input_copies", 1);
    s.target_copies = j.value("target_copies", 1);
    const std::string flavor = j.value("flavor", "multicopy");
    if (flavor == "multicopy")
        s.flavor = ConversionFlavor::multicopy;
    else if (flavor == "subadditive")
        s.flavor = ConversionFlavor::subadditive;
    else
        throw spec_error("unknown conversion flavor: " + flavor);
    const std::string purity = j.value("purity", "pure");
    if (purity == "pure")
        s.purity = Purity::pure;
    else if (purity == "mixed")
        s.purity = Purity::mixed;
    else
        throw spec_error("unknown purity flag: " + purity);
    return s;
}

inline json region_to_json(const NoGoRegion& r,
                           const std::vector<std::string>& profile_refs = {}) {
    json rects = json::array();
    for (const NoGoRegion::Rectangle& rect : r.rectangles)
        rects.push_back(json{{"p_gt", rect.p_gt},
                             {"delta_lt", rect.delta_lt},
                             {"n", rect.n},
                             {"q", rect.q},
                             {"certified", rect.certified}});
    json boundary = json::array();
    for (auto [p, d] : r.boundary()) boundary.push_back(json{{"p", p}, {"delta", d}});
    return json{{"scenario", scenario_to_json(r.scenario)},
                {"rectangles", std::move(rects)},
                {"boundary", std::move(boundary)},
                {"input_cap", r.input_cap},
                {"target_cap", r.target_cap},
                {"profile_refs", profile_refs}};
}

inline NoGoRegion region_from_json(const json& j) {
    NoGoRegion r;
    r.scenario = scenario_from_json(j.at("scenario"));
    r.input_cap = j.value("input_cap", 0);
    r.target_cap = j.value("target_cap", 0);
    for (const json& e : j.at("rectangles")) {
        NoGoRegion::Rectangle rect;
        rect.p_gt = e.at("p_gt").get<double>();
        rect.delta_lt = e.at("delta_lt").get<double>();
        rect.n = e.at("n").get<int>();
        rect.q = e.at("q").get<int>();
        rect.certified = e.at("certified").get<bool>();
        r.rectangles.push_back(rect);
    }
    return r;
}

namespace detail {

inline std::string csv_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

inline std::string profile_csv(const StellarProfile& p) {
    std::string out = "n,f_star\n";
    for (int n = 0; n <= p.n_max; ++n)
        out += std::to_string(n) + "," +
               detail::csv_double(p.values[static_cast<std::size_t>(n)]) + "\n";
    return out;
}

inline std::string boundary_csv(const NoGoRegion& r) {
    std::string out = "p,delta\n";
    for (auto [p, d] : r.boundary())
        out += detail::csv_double(p) + "," + detail::csv_double(d) + "\n";
    return out;
}

} // namespace stellar

#endif
