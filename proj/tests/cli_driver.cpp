// End-to-end checks of the latreg command-line interface. Takes the binary
// path as argv[1]; every check prints one [PASS]/[FAIL] line.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <latreg/latreg.hpp>

namespace fs = std::filesystem;
using latreg::Json;

namespace {

int g_failures = 0;
std::string g_binary;
fs::path g_dir;

void check(const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
                detail.c_str());
    if (!ok) ++g_failures;
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const fs::path out = g_dir / "stdout.txt";
    const fs::path err = g_dir / "stderr.txt";
    const std::string cmd =
        g_binary + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_driver <path-to-latreg>\n");
        return 2;
    }
    g_binary = argv[1];
    g_dir = fs::temp_directory_path() / ("latreg_cli_" + std::to_string(::getpid()));
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);

    // lattice info
    {
        auto r = run("lattice info --generator 1,0,0,1");
        bool ok = r.code == 0;
        if (ok) {
            Json j = Json::parse(r.out);
            ok = j["volume"].get<double>() == 1.0 && j["dim"].get<int>() == 2 &&
                 j["dual_generator"][0][0].get<double>() == 1.0 &&
                 j["dual_generator"][0][1].get<double>() == 0.0;
        }
        check("lattice info identity", ok);
    }

    // corpus generate -> estimate-alpha pipeline
    {
        const fs::path coeffs = g_dir / "lac.json";
        auto gen = run("corpus generate --family lacunary --alpha 0.5 --band 4096 --out " +
                       coeffs.string());
        auto est = run("estimate-alpha --coeffs " + coeffs.string() + " --radii dyadic:2..5");
        bool ok = gen.code == 0 && est.code == 0;
        double alpha_hat = 0.0;
        if (ok) {
            alpha_hat = Json::parse(est.out)["alpha_hat"].get<double>();
            ok = std::abs(alpha_hat - 0.5) <= 0.05;
        }
        check("corpus -> estimate-alpha", ok, "alpha_hat " + std::to_string(alpha_hat));

        // a dyadic ladder reaching band/4 still estimates from its usable prefix
        auto wide = run("estimate-alpha --coeffs " + coeffs.string() + " --radii dyadic:4..10");
        bool wok = wide.code == 0;
        if (wok) {
            Json j = Json::parse(wide.out);
            wok = std::abs(j["alpha_hat"].get<double>() - 0.5) <= 0.05 &&
                  j["radii_used"].back().get<double>() < 1024.0;
        }
        check("estimate-alpha with wide dyadic ladder", wok);

        // Thin-wrapper contract: the CLI number equals the direct library call.
        if (ok) {
            auto spec = latreg::spectral_from_json(
                latreg::parse_json(latreg::read_text_file(coeffs.string()), "t"));
            auto direct = latreg::estimate_alpha_tail(spec, {4.0, 8.0, 16.0, 32.0});
            check("cli equals library estimate", alpha_hat == direct.alpha_hat);
        }
    }

    // duren check on the inverse-square sequence
    {
        std::ostringstream csv;
        csv << "index,weight\n";
        for (int n = 1; n <= 100000; ++n)
            csv << n << ',' << latreg::format_double(std::pow(n, -2.0)) << '\n';
        const fs::path seq = g_dir / "seq.csv";
        latreg::write_text_file(seq.string(), csv.str());
        auto r = run("duren check --sequence " + seq.string() + " --a 1 --b 2");
        bool ok = r.code == 0;
        std::string verdict;
        if (ok) {
            verdict = Json::parse(r.out)["verdict"].get<std::string>();
            ok = verdict == "Consistent";
        }
        check("duren check verdict", ok, verdict);
    }

    // transform round trip through grid files
    {
        auto lat = latreg::make_lattice({{1, 1}, {0, 1}});
        latreg::FamilyDescriptor desc;
        desc.family = latreg::Family::RandomBandLimited;
        desc.dim = 2;
        desc.band = 5.0;
        desc.seed = 27;
        auto spec = latreg::generate(desc, lat);
        auto grid = latreg::synthesize(spec, {24, 24});
        const fs::path grid_path = g_dir / "grid.json";
        latreg::write_text_file(grid_path.string(), latreg::grid_to_json(grid).dump());

        const fs::path spec_path = g_dir / "spec.json";
        const fs::path grid2_path = g_dir / "grid2.json";
        auto fwd = run("transform --grid " + grid_path.string() + " --out " + spec_path.string());
        auto inv = run("transform --inverse --coeffs " + spec_path.string() +
                       " --resolution 24,24 --out " + grid2_path.string());
        bool ok = fwd.code == 0 && inv.code == 0;
        double max_err = 0.0;
        if (ok) {
            auto grid2 = latreg::grid_from_json(
                latreg::parse_json(latreg::read_text_file(grid2_path.string()), "t"));
            for (std::size_t i = 0; i < grid.values.size(); ++i)
                max_err = std::max(max_err, std::abs(grid.values[i] - grid2.values[i]));
            ok = max_err <= 1e-10;
        }
        check("transform round trip", ok, "max err " + std::to_string(max_err));
    }

    // multiplier apply equals the library path
    {
        const fs::path coeffs = g_dir / "pl.json";
        auto gen = run("corpus generate --family powerlaw --alpha 0.4 --band 128 --out " +
                       coeffs.string());
        const fs::path damped = g_dir / "damped.json";
        auto ap = run("multiplier apply --coeffs " + coeffs.string() +
                      " --symbol bessel-inv:gamma=0.3 --out " + damped.string());
        bool ok = gen.code == 0 && ap.code == 0;
        if (ok) {
            auto spec = latreg::spectral_from_json(
                latreg::parse_json(latreg::read_text_file(coeffs.string()), "t"));
            auto expect = latreg::apply(latreg::bessel_inverse(0.3), spec);
            auto got = latreg::spectral_from_json(
                latreg::parse_json(latreg::read_text_file(damped.string()), "t"));
            ok = got.coeffs.size() == expect.coeffs.size();
            for (std::size_t i = 0; ok && i < got.coeffs.size(); ++i)
                ok = got.coeffs[i].value == expect.coeffs[i].value;
        }
        check("multiplier apply equals library", ok);

        auto verify = run("multiplier verify --coeffs " + coeffs.string() +
                          " --alpha 0.3 --gamma 0.2");
        bool vok = verify.code == 0;
        if (vok) {
            Json j = Json::parse(verify.out);
            vok = j["norm_bound"]["holds"].get<bool>();
        }
        check("multiplier verify", vok);
    }

    // probe at and above the critical exponent
    {
        const fs::path coeffs = g_dir / "zyg.json";
        auto gen = run("corpus generate --family zygmund --alpha 0.5 --band 65536 --out " +
                       coeffs.string());
        auto pr = run("probe --coeffs " + coeffs.string() + " --alpha 0.5 --p 2 --gammas 1.0,1.2");
        bool ok = gen.code == 0 && pr.code == 0;
        if (ok) {
            Json j = Json::parse(pr.out);
            ok = j["boundary_gamma"].get<double>() == 1.0 &&
                 j["memberships"][0]["verdict"] == "Divergent" &&
                 j["memberships"][1]["verdict"] == "Convergent";
        }
        check("probe verdicts", ok);

        auto csv = run("probe --coeffs " + coeffs.string() +
                       " --alpha 0.5 --p 2 --gammas 1.0,1.2 --format csv");
        check("probe csv format",
              csv.code == 0 && csv.out.rfind("gamma,verdict,block_slope\n", 0) == 0 &&
                  csv.out.find("Divergent") != std::string::npos);
    }

    // report pipeline: determinism and bundle layout
    {
        Json cfg{{"lattice", {{"generator", {{1.0}}}}},
                 {"input", {{"corpus", {{"family", "zygmund"}, {"alpha", 0.5}, {"band", 16384.0}}}}},
                 {"analyses",
                  Json::array({Json{{"kind", "estimate-alpha"}, {"params", {{"radii", "default"}}}},
                               Json{{"kind", "tail"}, {"params", {{"radii", "dyadic:3..9"}}}},
                               Json{{"kind", "probe"},
                                    {"params",
                                     {{"alpha", 0.5}, {"p", 2.0}, {"gammas", {1.0, 1.2}}}}},
                               Json{{"kind", "zygmund"},
                                    {"params", {{"alpha", 0.5}, {"n_max", 16384}}}},
                               Json{{"kind", "regularity"},
                                    {"params", {{"gammas", {1.0, 1.2, 2.0}}}}}})},
                 {"output_dir", (g_dir / "out_a").string()},
                 {"seed", 42}};
        const fs::path cfg_path = g_dir / "config.json";
        latreg::write_text_file(cfg_path.string(), cfg.dump(2));

        auto r1 = run("report --config " + cfg_path.string());
        auto r2 = run("report --config " + cfg_path.string() + " --out-dir " +
                      (g_dir / "out_b").string());
        bool ok = r1.code == 0 && r2.code == 0;
        std::string why;
        if (ok) {
            const std::string rep_a = slurp(g_dir / "out_a" / "report.json");
            const std::string rep_b = slurp(g_dir / "out_b" / "report.json");
            ok = !rep_a.empty() && rep_a == rep_b;
            if (!ok) why = "report.json not byte-identical";
            ok = ok && fs::exists(g_dir / "out_a" / "manifest.json") &&
                 fs::exists(g_dir / "out_a" / "decay_0.csv") &&
                 fs::exists(g_dir / "out_a" / "decay_1.csv");
            if (why.empty() && !ok) why = "bundle files missing";
            if (ok) {
                Json rep = Json::parse(rep_a);
                for (const auto& a : rep["analyses"])
                    if (a["status"] != "ok") {
                        ok = false;
                        why = "analysis failed: " + a.dump();
                    }
                if (ok) {
                    ok = rep["analyses"][3]["result"]["verdict_at_beta"]["verdict"] == "Divergent" &&
                         rep["analyses"][3]["result"]["verdict_above_beta"]["verdict"] ==
                             "Convergent";
                    if (!ok) why = "zygmund verdicts wrong";
                }
                if (ok) {
                    const Json& reg = rep["analyses"][4]["result"];
                    ok = reg.contains("alpha_hat") && reg.contains("norms") &&
                         reg["norms"].contains("ratio") && reg.contains("memberships") &&
                         reg.contains("boundary_gamma") &&
                         std::abs(reg["alpha_hat"].get<double>() - 0.5) <= 0.05;
                    if (!ok) why = "regularity record malformed";
                }
            }
        }
        check("report bundle + determinism", ok, why);
    }

    // tensor generation through the CLI equals the library generator
    {
        const fs::path out = g_dir / "tensor.json";
        auto r = run("corpus generate --family tensor --alphas 0.3,0.6 --band 64 --out " +
                     out.string());
        bool ok = r.code == 0;
        if (ok) {
            auto got = latreg::spectral_from_json(
                latreg::parse_json(latreg::read_text_file(out.string()), "t"));
            latreg::FamilyDescriptor desc;
            desc.family = latreg::Family::TensorProduct;
            desc.dim = 2;
            desc.alphas = {0.3, 0.6};
            desc.band = 64.0;
            auto expect = latreg::generate(desc, latreg::make_lattice({{1, 0}, {0, 1}}));
            ok = got.coeffs.size() == expect.coeffs.size() && got.lattice.dim == 2;
            for (std::size_t i = 0; ok && i < got.coeffs.size(); ++i)
                ok = got.coeffs[i].value == expect.coeffs[i].value;
        }
        check("tensor corpus via cli", ok);
    }

    // report accepts a coefficient file as input
    {
        const fs::path coeffs = g_dir / "pl_report.json";
        auto gen = run("corpus generate --family powerlaw --alpha 0.4 --band 1024 --out " +
                       coeffs.string());
        Json cfg{{"input", {{"path", coeffs.string()}}},
                 {"analyses",
                  Json::array({Json{{"kind", "estimate-alpha"}, {"params", {{"radii", "default"}}}}})},
                 {"output_dir", (g_dir / "out_path").string()}};
        const fs::path cfg_path = g_dir / "path_config.json";
        latreg::write_text_file(cfg_path.string(), cfg.dump());
        auto r = run("report --config " + cfg_path.string());
        bool ok = gen.code == 0 && r.code == 0;
        if (ok) {
            Json rep = Json::parse(slurp(g_dir / "out_path" / "report.json"));
            ok = rep["analyses"][0]["status"] == "ok" &&
                 std::abs(rep["analyses"][0]["result"]["alpha_hat"].get<double>() - 0.4) <= 0.05;
        }
        check("report from coefficient file", ok);
    }

    // exit codes: usage (2), analysis (1), and machine-readable errors
    {
        auto bad_flag = run("estimate-alpha --no-such-flag");
        check("usage error exits 2", bad_flag.code == 2);

        Json cfg{{"analyses", Json::array()}, {"output_dir", (g_dir / "out_c").string()}};
        const fs::path cfg_path = g_dir / "empty.json";
        latreg::write_text_file(cfg_path.string(), cfg.dump());
        auto empty = run("report --config " + cfg_path.string());
        check("empty analyses exits 2", empty.code == 2);

        auto missing = run("estimate-alpha --coeffs " + (g_dir / "nope.json").string());
        bool ok = missing.code == 1;
        if (ok) {
            Json err = Json::parse(missing.err, nullptr, false);
            ok = !err.is_discarded() && err.contains("error");
        }
        check("analysis error exits 1 with JSON", ok);

        auto band_err = run("corpus generate --family powerlaw --alpha 0.5 --band 8");
        bool bok = band_err.code == 1;
        if (bok) {
            Json err = Json::parse(band_err.err, nullptr, false);
            bok = !err.is_discarded() && err["error"] == "InvalidArgument";
        }
        check("module error code surfaces", bok);
    }

    fs::remove_all(g_dir);
    if (g_failures) {
        std::printf("%d CLI check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all CLI checks passed\n");
    return 0;
}
