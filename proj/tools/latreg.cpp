// latreg — lattice spectral regularity toolbox.
//
// Subcommands wire the library into reproducible JSON/CSV pipelines:
//   lattice info, transform, corpus generate, tail, estimate-alpha, norms,
//   probe, multiplier apply|verify, duren check, report.
// Exit codes: 0 success, 1 analysis error (JSON diagnostics on stderr),
// 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <latreg/latreg.hpp>

namespace fs = std::filesystem;
using latreg::Json;

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void usage_fail(const std::string& msg) { throw CLI::ValidationError(msg); }

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            usage_fail("expected a comma-separated number list, got '" + text + "'");
        }
    }
    if (out.empty()) usage_fail("empty number list");
    return out;
}

// "dyadic:4..10" -> {16,...,1024); "1,2,4" -> literal values; "default" -> {}.
std::vector<double> parse_radii(const std::string& spec) {
    if (spec.empty() || spec == "default") return {};
    if (spec.rfind("dyadic:", 0) == 0) {
        const std::string range = spec.substr(7);
        const auto dots = range.find("..");
        if (dots == std::string::npos) usage_fail("dyadic radii need the form dyadic:lo..hi");
        try {
            const int lo = std::stoi(range.substr(0, dots));
            const int hi = std::stoi(range.substr(dots + 2));
            if (lo > hi || lo < 0 || hi > 60) usage_fail("bad dyadic exponent range");
            std::vector<double> out;
            for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, k));
            return out;
        } catch (const CLI::ValidationError&) {
            throw;
        } catch (const std::exception&) {
            usage_fail("bad dyadic radii spec '" + spec + "'");
        }
    }
    return parse_number_list(spec);
}

latreg::Lattice parse_lattice_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@')
        return latreg::lattice_from_json(
            latreg::parse_json(latreg::read_text_file(arg.substr(1)), "lattice file"));
    const std::vector<double> flat = parse_number_list(arg);
    const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
    if (static_cast<std::size_t>(d) * d != flat.size())
        usage_fail("generator needs d*d comma-separated entries");
    std::vector<std::vector<double>> rows(d, std::vector<double>(d));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) rows[r][c] = flat[static_cast<std::size_t>(r) * d + c];
    return latreg::make_lattice(rows);
}

latreg::Symbol parse_symbol_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::istringstream in(spec.substr(colon + 1));
        std::string item;
        std::string last_key;
        while (std::getline(in, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                // bare numbers extend the previous list-valued key (tensor gammas)
                if (last_key.empty()) usage_fail("symbol options must be key=value");
                kv[last_key] += "," + item;
                continue;
            }
            last_key = item.substr(0, eq);
            kv[last_key] = item.substr(eq + 1);
        }
    }
    auto need_gamma = [&]() -> double {
        auto it = kv.find("gamma");
        if (it == kv.end()) usage_fail("symbol spec needs gamma=<value>");
        return std::stod(it->second);
    };
    if (kind == "bessel-inv") return latreg::bessel_inverse(need_gamma());
    if (kind == "bessel-fwd") return latreg::bessel_forward(need_gamma());
    if (kind == "laplacian") {
        auto dir = kv.count("dir") ? kv["dir"] : "inverse";
        if (dir != "forward" && dir != "inverse") usage_fail("laplacian dir must be forward|inverse");
        return latreg::laplacian_bessel(need_gamma(), dir == "forward"
                                                          ? latreg::SymbolDirection::Forward
                                                          : latreg::SymbolDirection::Inverse);
    }
    if (kind == "tensor") {
        if (!kv.count("gammas")) usage_fail("tensor symbol needs gammas=a,b,...");
        return latreg::tensor_bessel(parse_number_list(kv["gammas"]));
    }
    if (kind == "custom") {
        std::string path = spec.substr(colon + 1);
        if (path.empty() || path[0] != '@') usage_fail("custom symbol needs custom:@file.json");
        Json j = latreg::parse_json(latreg::read_text_file(path.substr(1)), "symbol table");
        std::map<std::vector<int>, std::complex<double>> table;
        for (const auto& e : j.at("entries"))
            table[e.at("m").get<std::vector<int>>()] = {e.at("re").get<double>(),
                                                        e.at("im").get<double>()};
        return latreg::custom_symbol(std::move(table));
    }
    usage_fail("unknown symbol kind '" + kind + "'");
}

latreg::SpectralFunction load_spectral(const std::string& path) {
    return latreg::spectral_from_json(
        latreg::parse_json(latreg::read_text_file(path), "spectral function file"));
}

void emit(const Json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        latreg::write_text_file(out_path, text);
}

Json verdicts_json(const std::vector<latreg::MembershipVerdict>& verdicts) {
    Json arr = Json::array();
    for (const auto& v : verdicts)
        arr.push_back(Json{{"gamma", v.gamma},
                           {"verdict", latreg::to_string(v.verdict)},
                           {"block_slope", v.block_slope}});
    return arr;
}

latreg::WeightedSequence radial_weight_sequence(const latreg::SpectralFunction& spec) {
    std::vector<latreg::WeightedEntry> entries;
    entries.reserve(spec.coeffs.size());
    for (const auto& c : spec.coeffs) entries.push_back({c.point.norm, std::norm(c.value)});
    return latreg::make_weighted_sequence(std::move(entries), "|f^|^2 by |kappa|");
}

std::vector<double> radii_or_default(const std::string& spec, double band) {
    std::vector<double> r = parse_radii(spec);
    return r.empty() ? latreg::default_radii(band) : r;
}

// ---- analyses shared by the direct subcommands and `report` -----------------

Json run_estimate_alpha(const latreg::SpectralFunction& spec, const std::string& radii_spec) {
    const auto est = latreg::estimate_alpha_tail(spec, radii_or_default(radii_spec, spec.band));
    return Json{{"alpha_hat", est.alpha_hat},
                {"p", est.p},
                {"method", "TailSlope"},
                {"residual", est.residual},
                {"radii_used", est.radii_used},
                {"out_of_range", est.out_of_range}};
}

Json run_norms(const latreg::SpectralFunction& spec, double alpha) {
    const auto n = latreg::norm_equivalence_report(spec, alpha);
    return Json{{"alpha", n.alpha},
                {"tail_norm", n.tail_norm},
                {"direct_norm", n.direct_norm},
                {"ratio", n.ratio}};
}

Json run_probe(const latreg::SpectralFunction& spec, double alpha, double p,
               const std::vector<double>& gammas) {
    const auto verdicts = latreg::first_titchmarsh_probe(spec, alpha, p, gammas);
    return Json{{"alpha", alpha},
                {"p", p},
                {"boundary_gamma", verdicts.empty() ? 0.0 : verdicts.front().boundary_gamma},
                {"memberships", verdicts_json(verdicts)}};
}

Json run_multiplier_verify(const latreg::SpectralFunction& spec, double alpha, double gamma) {
    const auto smoothing = latreg::smoothing_verification(spec, alpha, gamma);
    const auto bound = latreg::norm_bound_check(spec, alpha, gamma);
    return Json{{"alpha", alpha},
                {"gamma", gamma},
                {"convention", "japanese-bracket"},
                {"smoothing",
                 Json{{"alpha_before", smoothing.alpha_before},
                      {"alpha_after", smoothing.alpha_after},
                      {"gain", smoothing.gain}}},
                {"norm_bound", Json{{"lhs", bound.lhs}, {"rhs", bound.rhs}, {"holds", bound.holds}}}};
}

Json run_duren_check(const latreg::WeightedSequence& seq, double a, double b,
                     std::vector<double> radii, latreg::DecayProfile* profile_out) {
    if (radii.empty()) {
        const double top = seq.support.empty() ? 0.0 : seq.support.back().index;
        for (double r = 4.0; r <= top / 2.0; r *= 2.0) radii.push_back(r);
        if (radii.size() < 5)
            latreg::fail("InvalidArgument", "sequence support too short for default radii");
    }
    const auto check = latreg::duren_equivalence_check(seq, a, b, radii);
    if (profile_out) *profile_out = check.profile;
    const auto constants = latreg::refined_constants(a, b);
    return Json{{"a", a},
                {"b", b},
                {"verdict", latreg::to_string(check.verdict)},
                {"fitted_partial_exponent", check.profile.fitted_partial_exponent},
                {"fitted_tail_exponent", check.profile.fitted_tail_exponent},
                {"residual", check.profile.residual},
                {"constants",
                 Json{{"forward", constants.forward},
                      {"forward_lattice", constants.forward_lattice},
                      {"converse", constants.converse}}}};
}

// The combined per-function record: estimated exponent, both norms, and the
// sequence-space verdicts at that exponent.
Json run_regularity(const latreg::SpectralFunction& spec, const Json& params) {
    const auto est =
        latreg::estimate_alpha_tail(spec, radii_or_default(params.value("radii", ""), spec.band));
    double alpha = params.value("alpha", est.alpha_hat);
    alpha = std::min(0.95, std::max(0.05, alpha));
    const double p = params.value("p", 2.0);
    const std::vector<double> gammas =
        params.contains("gammas") ? params["gammas"].get<std::vector<double>>()
                                  : std::vector<double>{1.0, 1.5, 2.0};

    const auto norms = latreg::norm_equivalence_report(spec, alpha);
    const auto verdicts = latreg::first_titchmarsh_probe(spec, alpha, p, gammas);
    return Json{{"alpha_hat", est.alpha_hat},
                {"residual", est.residual},
                {"out_of_range", est.out_of_range},
                {"norms",
                 Json{{"tail", norms.tail_norm},
                      {"direct", norms.direct_norm},
                      {"ratio", norms.ratio}}},
                {"memberships", verdicts_json(verdicts)},
                {"boundary_gamma", verdicts.empty() ? 0.0 : verdicts.front().boundary_gamma}};
}

Json run_zygmund(double alpha, int n_max) {
    const auto rep = latreg::zygmund_sharpness_report(alpha, n_max);
    return Json{{"alpha", rep.alpha},
                {"beta", rep.beta},
                {"alpha_hat", rep.alpha_estimate.alpha_hat},
                {"alpha_residual", rep.alpha_estimate.residual},
                {"log_growth_coef", rep.log_growth_coef},
                {"log_growth_residual", rep.log_growth_residual},
                {"verdict_at_beta",
                 Json{{"gamma", rep.verdict_at_beta.gamma},
                      {"verdict", latreg::to_string(rep.verdict_at_beta.verdict)},
                      {"block_slope", rep.verdict_at_beta.block_slope}}},
                {"verdict_above_beta",
                 Json{{"gamma", rep.verdict_above_beta.gamma},
                      {"verdict", latreg::to_string(rep.verdict_above_beta.verdict)},
                      {"block_slope", rep.verdict_above_beta.block_slope}}}};
}

latreg::FamilyDescriptor descriptor_from_flags(const std::string& family, double alpha,
                                               const std::string& alphas, double band, int dim,
                                               std::uint64_t seed, bool zero_phase) {
    latreg::FamilyDescriptor desc;
    desc.family = latreg::family_from_string(family);
    desc.alpha = alpha;
    desc.band = band;
    desc.seed = seed;
    desc.zero_phase = zero_phase;
    if (!alphas.empty()) desc.alphas = parse_number_list(alphas);
    desc.dim = dim > 0 ? dim
               : desc.family == latreg::Family::TensorProduct
                   ? static_cast<int>(desc.alphas.size())
                   : 1;
    return desc;
}

// ---- report pipeline ---------------------------------------------------------

int run_report(const std::string& config_path, const std::string& out_dir_override) {
    Json cfg;
    try {
        cfg = latreg::parse_json(latreg::read_text_file(config_path), "pipeline config");
    } catch (const latreg::Error& e) {
        usage_fail(std::string("config: ") + e.what());
    }
    if (!cfg.contains("analyses") || !cfg["analyses"].is_array() || cfg["analyses"].empty())
        usage_fail("pipeline config needs a non-empty 'analyses' list");

    const std::uint64_t seed = cfg.value("seed", 42ull);
    std::string out_dir = out_dir_override.empty() ? cfg.value("output_dir", "") : out_dir_override;
    if (out_dir.empty()) usage_fail("pipeline config needs 'output_dir'");
    fs::create_directories(out_dir);

    latreg::Lattice lattice = cfg.contains("lattice") ? latreg::lattice_from_json(cfg["lattice"])
                                                      : latreg::make_lattice({{1.0}});

    // Input: a spectral-function file or a corpus descriptor.
    latreg::SpectralFunction spec;
    bool have_spec = false;
    if (cfg.contains("input")) {
        const Json& input = cfg["input"];
        if (input.contains("path")) {
            const std::string path = input["path"].get<std::string>();
            if (!fs::exists(path)) usage_fail("input path '" + path + "' does not exist");
            spec = load_spectral(path);
            lattice = spec.lattice;
            have_spec = true;
        } else if (input.contains("corpus")) {
            auto desc = latreg::descriptor_from_json(input["corpus"]);
            if (!input["corpus"].contains("seed")) desc.seed = seed;
            if (desc.dim != lattice.dim) {
                std::vector<std::vector<double>> rows(desc.dim, std::vector<double>(desc.dim, 0.0));
                for (int i = 0; i < desc.dim; ++i) rows[i][i] = 1.0;
                lattice = latreg::make_lattice(rows);
            }
            spec = latreg::generate(desc, lattice);
            have_spec = true;
        }
    }

    Json analyses = Json::array();
    int index = 0;
    for (const auto& analysis : cfg["analyses"]) {
        const std::string kind = analysis.value("kind", "");
        const Json params = analysis.value("params", Json::object());
        Json entry{{"kind", kind}};
        try {
            auto need_spec = [&]() -> const latreg::SpectralFunction& {
                if (!have_spec)
                    latreg::fail("InvalidArgument", "analysis '" + kind + "' needs an input spectrum");
                return spec;
            };
            auto write_tail_curve = [&](const latreg::SpectralFunction& s,
                                        const std::vector<double>& radii) {
                std::vector<double> tails;
                for (double r : radii) tails.push_back(latreg::tail_sum(s, r));
                const std::string csv_name = "decay_" + std::to_string(index) + ".csv";
                latreg::write_text_file((fs::path(out_dir) / csv_name).string(),
                                        latreg::decay_curve_csv(radii, tails));
                return csv_name;
            };
            if (kind == "estimate-alpha") {
                const auto& s = need_spec();
                entry["result"] = run_estimate_alpha(s, params.value("radii", ""));
                entry["result"]["csv"] =
                    write_tail_curve(s, entry["result"]["radii_used"].get<std::vector<double>>());
            } else if (kind == "regularity") {
                const auto& s = need_spec();
                entry["result"] = run_regularity(s, params);
                entry["result"]["csv"] = write_tail_curve(
                    s, radii_or_default(params.value("radii", ""), s.band));
            } else if (kind == "tail") {
                const auto& s = need_spec();
                const auto radii = radii_or_default(params.value("radii", ""), s.band);
                const auto prof =
                    latreg::profile(radial_weight_sequence(s), params.value("b", 2.0), radii);
                const std::string csv_name = "decay_" + std::to_string(index) + ".csv";
                latreg::write_text_file((fs::path(out_dir) / csv_name).string(),
                                        latreg::profile_to_csv(prof));
                entry["result"] = latreg::profile_sidecar_json(prof);
                entry["result"]["csv"] = csv_name;
            } else if (kind == "norms") {
                entry["result"] = run_norms(need_spec(), params.at("alpha").get<double>());
            } else if (kind == "probe") {
                entry["result"] =
                    run_probe(need_spec(), params.at("alpha").get<double>(),
                              params.value("p", 2.0), params.at("gammas").get<std::vector<double>>());
            } else if (kind == "multiplier-verify") {
                entry["result"] = run_multiplier_verify(need_spec(), params.at("alpha").get<double>(),
                                                        params.at("gamma").get<double>());
            } else if (kind == "duren-check") {
                const auto seq = latreg::sequence_from_csv(
                    latreg::read_text_file(params.at("sequence").get<std::string>()));
                latreg::DecayProfile prof;
                entry["result"] = run_duren_check(seq, params.at("a").get<double>(),
                                                  params.at("b").get<double>(),
                                                  parse_radii(params.value("radii", "")), &prof);
                const std::string csv_name = "decay_" + std::to_string(index) + ".csv";
                latreg::write_text_file((fs::path(out_dir) / csv_name).string(),
                                        latreg::profile_to_csv(prof));
                entry["result"]["csv"] = csv_name;
            } else if (kind == "zygmund") {
                entry["result"] =
                    run_zygmund(params.value("alpha", 0.5), params.value("n_max", 65536));
            } else {
                latreg::fail("InvalidArgument", "unknown analysis kind '" + kind + "'");
            }
            entry["status"] = "ok";
        } catch (const latreg::Error& e) {
            entry["status"] = "error";
            entry["error"] = Json{{"code", e.code()}, {"message", e.what()}};
        } catch (const Json::exception& e) {
            entry["status"] = "error";
            entry["error"] = Json{{"code", "ParseError"}, {"message", e.what()}};
        }
        analyses.push_back(std::move(entry));
        ++index;
    }

    Json report{{"tool", "latreg"},
                {"seed", seed},
                {"lattice", latreg::lattice_to_json(lattice)},
                {"analyses", std::move(analyses)}};
    latreg::write_text_file((fs::path(out_dir) / "report.json").string(), report.dump(2) + "\n");

    const auto now = std::chrono::system_clock::now();
    Json manifest{{"tool", "latreg"},
                  {"version", kVersion},
                  {"seed", seed},
                  {"generated_at_unix_ms",
                   std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
                       .count()}};
    latreg::write_text_file((fs::path(out_dir) / "manifest.json").string(),
                            manifest.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice spectral regularity toolbox"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    int threads = -1;
    app.add_option("--seed", seed, "seed for all randomized steps")->capture_default_str();
    app.add_option("--threads", threads, "worker cap (0 = hardware)");

    std::string format = "json";

    // lattice info
    auto* lattice_cmd = app.add_subcommand("lattice", "lattice geometry queries");
    auto* lattice_info = lattice_cmd->add_subcommand("info", "dual generator and volume");
    std::string li_generator = "1";
    std::string li_out;
    lattice_info->add_option("--generator", li_generator, "row-major entries or @file.json")
        ->required();
    lattice_info->add_option("--out", li_out, "output path (default stdout)");

    // transform
    auto* transform_cmd = app.add_subcommand("transform", "grid <-> spectral transforms");
    std::string tr_grid, tr_coeffs, tr_out, tr_resolution;
    bool tr_inverse = false;
    transform_cmd->add_option("--grid", tr_grid, "grid-sample JSON (forward)");
    transform_cmd->add_option("--coeffs", tr_coeffs, "spectral JSON (inverse)");
    transform_cmd->add_option("--resolution", tr_resolution, "per-axis resolution (inverse)");
    transform_cmd->add_flag("--inverse", tr_inverse, "synthesize a grid from coefficients");
    transform_cmd->add_option("--out", tr_out, "output path (default stdout)");

    // corpus generate
    auto* corpus_cmd = app.add_subcommand("corpus", "ground-truth function families");
    auto* corpus_gen = corpus_cmd->add_subcommand("generate", "emit a family member");
    std::string cg_family, cg_alphas, cg_lattice, cg_out;
    double cg_alpha = 0.5, cg_band = 64.0;
    int cg_dim = 0;
    bool cg_zero_phase = false;
    corpus_gen->add_option("--family", cg_family, "powerlaw|lacunary|zygmund|tensor|random")
        ->required();
    corpus_gen->add_option("--alpha", cg_alpha, "regularity exponent");
    corpus_gen->add_option("--alphas", cg_alphas, "per-coordinate exponents (tensor)");
    corpus_gen->add_option("--band", cg_band, "spectral radius / per-axis width");
    corpus_gen->add_option("--dim", cg_dim, "dimension (default 1, or #alphas)");
    corpus_gen->add_option("--lattice", cg_lattice, "generator entries or @file.json");
    corpus_gen->add_flag("--zero-phase", cg_zero_phase, "deterministic zero phases");
    corpus_gen->add_option("--out", cg_out, "output path (default stdout)");

    // tail
    auto* tail_cmd = app.add_subcommand("tail", "decay profile of |f^|^2 by |kappa|");
    std::string tl_coeffs, tl_radii, tl_out, tl_sidecar;
    double tl_b = 2.0;
    tail_cmd->add_option("--coeffs", tl_coeffs, "spectral JSON")->required();
    tail_cmd->add_option("--radii", tl_radii, "dyadic:lo..hi | comma list | default");
    tail_cmd->add_option("--b", tl_b, "partial-sum weight exponent")->capture_default_str();
    tail_cmd->add_option("--out", tl_out, "CSV output path (default stdout)");
    tail_cmd->add_option("--sidecar", tl_sidecar, "fitted-exponent JSON path");

    // estimate-alpha
    auto* est_cmd = app.add_subcommand("estimate-alpha", "tail-slope regularity estimate");
    std::string ea_coeffs, ea_radii, ea_out;
    est_cmd->add_option("--coeffs", ea_coeffs, "spectral JSON")->required();
    est_cmd->add_option("--radii", ea_radii, "dyadic:lo..hi | comma list | default");
    est_cmd->add_option("--format", format, "json|csv");
    est_cmd->add_option("--out", ea_out, "output path (default stdout)");

    // norms
    auto* norms_cmd = app.add_subcommand("norms", "tail and translation norms");
    std::string no_coeffs, no_out;
    double no_alpha = 0.5;
    norms_cmd->add_option("--coeffs", no_coeffs, "spectral JSON")->required();
    norms_cmd->add_option("--alpha", no_alpha, "regularity exponent")->required();
    norms_cmd->add_option("--format", format, "json|csv");
    norms_cmd->add_option("--out", no_out, "output path (default stdout)");

    // probe
    auto* probe_cmd = app.add_subcommand("probe", "sequence-space membership verdicts");
    std::string pr_coeffs, pr_gammas, pr_out;
    double pr_alpha = 0.5, pr_p = 2.0;
    probe_cmd->add_option("--coeffs", pr_coeffs, "spectral JSON")->required();
    probe_cmd->add_option("--alpha", pr_alpha, "regularity exponent")->required();
    probe_cmd->add_option("--p", pr_p, "integrability exponent")->capture_default_str();
    probe_cmd->add_option("--gammas", pr_gammas, "comma list of exponents")->required();
    probe_cmd->add_option("--format", format, "json|csv");
    probe_cmd->add_option("--out", pr_out, "output path (default stdout)");

    // multiplier apply|verify
    auto* mult_cmd = app.add_subcommand("multiplier", "spectral multiplier operations");
    auto* mult_apply = mult_cmd->add_subcommand("apply", "apply a symbol to coefficients");
    std::string ma_coeffs, ma_symbol, ma_out;
    mult_apply->add_option("--coeffs", ma_coeffs, "spectral JSON")->required();
    mult_apply->add_option("--symbol", ma_symbol,
                           "bessel-inv:gamma=G | bessel-fwd:gamma=G | "
                           "laplacian:gamma=G,dir=forward|inverse | tensor:gammas=... | "
                           "custom:@file.json")
        ->required();
    mult_apply->add_option("--out", ma_out, "output path (default stdout)");
    auto* mult_verify = mult_cmd->add_subcommand("verify", "smoothing and norm-bound checks");
    std::string mv_coeffs, mv_out;
    double mv_alpha = 0.3, mv_gamma = 0.2;
    mult_verify->add_option("--coeffs", mv_coeffs, "spectral JSON")->required();
    mult_verify->add_option("--alpha", mv_alpha, "regularity exponent")->required();
    mult_verify->add_option("--gamma", mv_gamma, "smoothing order")->required();
    mult_verify->add_option("--out", mv_out, "output path (default stdout)");

    // duren check
    auto* duren_cmd = app.add_subcommand("duren", "partial-sum/tail equivalence checks");
    auto* duren_check = duren_cmd->add_subcommand("check", "verdict for a weighted sequence");
    std::string dc_sequence, dc_radii, dc_out, dc_csv;
    double dc_a = 1.0, dc_b = 2.0;
    duren_check->add_option("--sequence", dc_sequence, "CSV of index,weight rows")->required();
    duren_check->add_option("--a", dc_a, "partial-sum exponent")->required();
    duren_check->add_option("--b", dc_b, "weight exponent")->required();
    duren_check->add_option("--radii", dc_radii, "dyadic:lo..hi | comma list | default");
    duren_check->add_option("--out", dc_out, "verdict JSON path (default stdout)");
    duren_check->add_option("--out-csv", dc_csv, "profile CSV path");

    // report
    auto* report_cmd = app.add_subcommand("report", "full pipeline from a config file");
    std::string rp_config, rp_out_dir;
    report_cmd->add_option("--config", rp_config, "pipeline config JSON")->required();
    report_cmd->add_option("--out-dir", rp_out_dir, "override the config output_dir");

    try {
        app.parse(argc, argv);

        if (threads >= 0)
            latreg::set_thread_limit(threads);
        else if (const char* env = std::getenv("LATREG_THREADS"))
            latreg::set_thread_limit(std::max(0, std::atoi(env)));

        if (*lattice_info) {
            const auto lat = parse_lattice_arg(li_generator);
            Json j = latreg::lattice_to_json(lat);
            j["dim"] = lat.dim;
            j["volume"] = lat.volume;
            Json dual = Json::array();
            for (int r = 0; r < lat.dim; ++r) {
                Json row = Json::array();
                for (int c = 0; c < lat.dim; ++c) row.push_back(lat.dual(r, c));
                dual.push_back(std::move(row));
            }
            j["dual_generator"] = std::move(dual);
            emit(j, li_out);
        } else if (*transform_cmd) {
            if (tr_inverse) {
                if (tr_coeffs.empty() || tr_resolution.empty())
                    usage_fail("transform --inverse needs --coeffs and --resolution");
                const auto spec = load_spectral(tr_coeffs);
                std::vector<int> resolution;
                for (double v : parse_number_list(tr_resolution))
                    resolution.push_back(static_cast<int>(std::llround(v)));
                emit(latreg::grid_to_json(latreg::synthesize(spec, resolution)), tr_out);
            } else {
                if (tr_grid.empty()) usage_fail("transform needs --grid (or --inverse)");
                const auto sample = latreg::grid_from_json(
                    latreg::parse_json(latreg::read_text_file(tr_grid), "grid file"));
                emit(latreg::spectral_to_json(latreg::forward_transform(sample)), tr_out);
            }
        } else if (*corpus_gen) {
            auto desc =
                descriptor_from_flags(cg_family, cg_alpha, cg_alphas, cg_band, cg_dim, seed,
                                      cg_zero_phase);
            latreg::Lattice lattice;
            if (!cg_lattice.empty()) {
                lattice = parse_lattice_arg(cg_lattice);
            } else {
                std::vector<std::vector<double>> rows(desc.dim, std::vector<double>(desc.dim, 0.0));
                for (int i = 0; i < desc.dim; ++i) rows[i][i] = 1.0;
                lattice = latreg::make_lattice(rows);
            }
            emit(latreg::spectral_to_json(latreg::generate(desc, lattice)), cg_out);
        } else if (*tail_cmd) {
            const auto spec = load_spectral(tl_coeffs);
            const auto prof = latreg::profile(radial_weight_sequence(spec), tl_b,
                                              radii_or_default(tl_radii, spec.band));
            const std::string csv = latreg::profile_to_csv(prof);
            if (tl_out.empty())
                std::cout << csv;
            else
                latreg::write_text_file(tl_out, csv);
            if (!tl_sidecar.empty())
                latreg::write_text_file(tl_sidecar,
                                        latreg::profile_sidecar_json(prof).dump(2) + "\n");
        } else if (*est_cmd) {
            const auto spec = load_spectral(ea_coeffs);
            const Json j = run_estimate_alpha(spec, ea_radii);
            if (format == "csv") {
                std::ostringstream out;
                out << "alpha_hat,residual,out_of_range\n"
                    << latreg::format_double(j["alpha_hat"].get<double>()) << ','
                    << latreg::format_double(j["residual"].get<double>()) << ','
                    << (j["out_of_range"].get<bool>() ? 1 : 0) << '\n';
                if (ea_out.empty())
                    std::cout << out.str();
                else
                    latreg::write_text_file(ea_out, out.str());
            } else {
                emit(j, ea_out);
            }
        } else if (*norms_cmd) {
            const Json j = run_norms(load_spectral(no_coeffs), no_alpha);
            if (format == "csv") {
                std::ostringstream out;
                out << "alpha,tail_norm,direct_norm,ratio\n"
                    << latreg::format_double(j["alpha"].get<double>()) << ','
                    << latreg::format_double(j["tail_norm"].get<double>()) << ','
                    << latreg::format_double(j["direct_norm"].get<double>()) << ','
                    << latreg::format_double(j["ratio"].get<double>()) << '\n';
                if (no_out.empty())
                    std::cout << out.str();
                else
                    latreg::write_text_file(no_out, out.str());
            } else {
                emit(j, no_out);
            }
        } else if (*probe_cmd) {
            const Json j =
                run_probe(load_spectral(pr_coeffs), pr_alpha, pr_p, parse_number_list(pr_gammas));
            if (format == "csv") {
                std::ostringstream out;
                out << "gamma,verdict,block_slope\n";
                for (const auto& v : j["memberships"])
                    out << latreg::format_double(v["gamma"].get<double>()) << ','
                        << v["verdict"].get<std::string>() << ','
                        << latreg::format_double(v["block_slope"].get<double>()) << '\n';
                if (pr_out.empty())
                    std::cout << out.str();
                else
                    latreg::write_text_file(pr_out, out.str());
            } else {
                emit(j, pr_out);
            }
        } else if (*mult_apply) {
            const auto spec = load_spectral(ma_coeffs);
            emit(latreg::spectral_to_json(latreg::apply(parse_symbol_spec(ma_symbol), spec)),
                 ma_out);
        } else if (*mult_verify) {
            emit(run_multiplier_verify(load_spectral(mv_coeffs), mv_alpha, mv_gamma), mv_out);
        } else if (*duren_check) {
            const auto seq = latreg::sequence_from_csv(latreg::read_text_file(dc_sequence));
            latreg::DecayProfile prof;
            const Json j = run_duren_check(seq, dc_a, dc_b, parse_radii(dc_radii), &prof);
            emit(j, dc_out);
            if (!dc_csv.empty()) latreg::write_text_file(dc_csv, latreg::profile_to_csv(prof));
        } else if (*report_cmd) {
            return run_report(rp_config, rp_out_dir);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const latreg::Error& e) {
        Json err{{"error", e.code()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        Json err{{"error", "InternalError"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
