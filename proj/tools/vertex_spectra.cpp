#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sixvertex/chain.hpp"
#include "sixvertex/jsonwriter.hpp"
#include "sixvertex/oracle.hpp"
#include "sixvertex/report.hpp"
#include "sixvertex/selftest.hpp"
#include "sixvertex/spectral.hpp"
#include "sixvertex/transfer.hpp"

namespace {

using namespace sixvertex;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegeneracy = 3;

Complex parse_complex(const std::string& text) {
  std::istringstream ss(text);
  double re = 0.0, im = 0.0;
  char sep = 0;
  if (!(ss >> re)) fail(Errc::Config, "cannot parse complex value '" + text + "'");
  if (ss >> sep) {
    if (sep != ',' || !(ss >> im))
      fail(Errc::Config, "complex values use the form RE,IM; got '" + text + "'");
  }
  return {re, im};
}

std::vector<Complex> parse_complex_list(const std::vector<std::string>& items) {
  std::vector<Complex> out;
  for (const auto& s : items) out.push_back(parse_complex(s));
  return out;
}

// "3-5" or "4"
std::pair<int, int> parse_l_range(const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) {
    const int L = std::stoi(text);
    return {L, L};
  }
  return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
}

void write_outputs(const std::string& json, const std::string& csv, const std::string& outPath,
                   const std::string& format) {
  if (outPath.empty()) {
    std::cout << (format == "csv" ? csv : json);
    if (format != "csv") std::cout << "\n";
    return;
  }
  std::ofstream jf(outPath, std::ios::binary);
  if (!jf) fail(Errc::Config, "cannot open output path " + outPath);
  jf << json << "\n";
  std::string csvPath = outPath;
  if (csvPath.size() > 5 && csvPath.substr(csvPath.size() - 5) == ".json")
    csvPath = csvPath.substr(0, csvPath.size() - 5);
  csvPath += ".csv";
  std::ofstream cf(csvPath, std::ios::binary);
  if (!cf) fail(Errc::Config, "cannot open output path " + csvPath);
  cf << csv;
}

ModelParams make_params(int L, Complex gamma, std::vector<Complex> mu, bool strict) {
  if (mu.empty()) {
    mu.assign(L, Complex{0.0});
    strict = false;  // coinciding inhomogeneities are intentional here
  }
  if (static_cast<int>(mu.size()) != L)
    fail(Errc::Config, "expected " + std::to_string(L) + " --mu entries, got " +
                           std::to_string(mu.size()));
  return ModelParams(L, gamma, std::move(mu), strict);
}

int exit_code_for(const Error& e) {
  return e.code() == Errc::DegenerateSpectrum ? kExitDegeneracy : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral-determinant verification engine for the domain-wall six-vertex model"};
  app.require_subcommand(1);

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the closed-form regression corpus");
  std::uint64_t selftestSeed = 20240601;
  bool corrupt = false;
  selftest->add_option("--seed", selftestSeed, "RNG seed");
  selftest->add_flag("--debug-corrupt-l2", corrupt,
                     "negative control: corrupt the L=2 reference closed form");

  // verify
  auto* verify = app.add_subcommand("verify", "randomized residual battery with JSON/CSV report");
  std::string verifyL = "3";
  int trials = 10;
  std::uint64_t seed = 42;
  double tol = 0.0;
  std::string gammaText, outPath, format = "json";
  bool noStrict = false;
  verify->add_option("--L", verifyL, "lattice length or range, e.g. 4 or 3-5");
  verify->add_option("--trials", trials, "trials per L");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--tol", tol, "override the end-to-end tolerance");
  verify->add_option("--gamma", gammaText, "fix gamma to RE,IM instead of sampling");
  verify->add_flag("--no-strict", noStrict, "disable the strict separation guard");
  verify->add_option("--out", outPath, "write JSON report here (CSV summary beside it)");
  verify->add_option("--format", format, "stdout format when --out is absent")
      ->check(CLI::IsMember({"json", "csv"}));

  // sweep
  auto* sweep = app.add_subcommand("sweep", "iterate verify over a (gamma, L) grid from a config");
  std::string configPath;
  std::string sweepOut, sweepFormat = "json";
  sweep->add_option("--config", configPath, "JSON config file")->required();
  sweep->add_option("--out", sweepOut, "write JSON report here (CSV summary beside it)");
  sweep->add_option("--format", sweepFormat, "stdout format when --out is absent")
      ->check(CLI::IsMember({"json", "csv"}));

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "emit the eigenvalue table as JSON lines");
  int specL = 2;
  std::string specGamma = "0.5,0.0";
  std::vector<std::string> specMu;
  std::string specRef, specOut;
  bool specNoStrict = false;
  spectrum->add_option("--L", specL, "lattice length");
  spectrum->add_option("--gamma", specGamma, "anisotropy RE,IM");
  spectrum->add_option("--mu", specMu, "inhomogeneities RE,IM (default: all zero)");
  spectrum->add_option("--ref", specRef, "reference point RE,IM");
  spectrum->add_flag("--no-strict", specNoStrict, "disable the strict separation guard");
  spectrum->add_option("--out", specOut, "write the table here instead of stdout");

  // zvalue
  auto* zvalue = app.add_subcommand("zvalue", "print {branch, kappa0, detH, Z} as JSON lines");
  int zL = 2;
  std::string zGamma = "0.5,0.0";
  std::vector<std::string> zMu, zLambda;
  int zBranch = -1;
  std::string zOut;
  bool zNoStrict = false;
  zvalue->add_option("--L", zL, "lattice length");
  zvalue->add_option("--gamma", zGamma, "anisotropy RE,IM");
  zvalue->add_option("--mu", zMu, "inhomogeneities RE,IM (default: all zero)");
  zvalue->add_option("--lambda", zLambda, "spectral points RE,IM")->required();
  zvalue->add_option("--branch", zBranch, "single branch index (default: all)");
  zvalue->add_flag("--no-strict", zNoStrict, "disable the strict separation guard");
  zvalue->add_option("--out", zOut, "write the lines here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (selftest->parsed()) {
      const int failures = run_selftest(std::cout, {selftestSeed, corrupt});
      return failures == 0 ? kExitPass : kExitVerificationFailure;
    }

    if (verify->parsed()) {
      SweepConfig cfg;
      const auto [lmin, lmax] = parse_l_range(verifyL);
      cfg.Lmin = lmin;
      cfg.Lmax = lmax;
      cfg.trials = trials;
      cfg.seed = seed;
      if (tol > 0.0) cfg.tol.endToEnd = tol;
      cfg.strictSeparation = !noStrict;
      if (!gammaText.empty()) cfg.fixedGamma = parse_complex(gammaText);
      const VerificationReport report = run_verify(cfg);
      write_outputs(report.to_json(), report.to_csv(), outPath, format);
      if (report.exhaustedCount() > 0) return kExitDegeneracy;
      return report.pass() ? kExitPass : kExitVerificationFailure;
    }

    if (sweep->parsed()) {
      std::ifstream in(configPath);
      if (!in) fail(Errc::Config, "cannot read config file " + configPath);
      std::stringstream buffer;
      buffer << in.rdbuf();
      const SweepFileConfig cfg = parse_sweep_config(buffer.str());
      const SweepReport report = run_sweep(cfg);
      write_outputs(report.to_json(), report.to_csv(), sweepOut, sweepFormat);
      return report.pass() ? kExitPass : kExitVerificationFailure;
    }

    if (spectrum->parsed()) {
      ModelParams params = make_params(specL, parse_complex(specGamma),
                                       parse_complex_list(specMu), !specNoStrict);
      const SpectrumTable table = specRef.empty()
                                      ? diagonalize_auto(params)
                                      : diagonalize(params, parse_complex(specRef));
      std::vector<double> leaks;
      const Eigen::VectorXcd values = eigenvalues_at(table, table.referencePoint, nullptr, &leaks);
      std::ostringstream lines;
      for (int k = 0; k < table.branchCount(); ++k) {
        JsonWriter w;
        w.beginObject();
        w.key("branch").integer(k);
        w.key("re").number(values(k).real());
        w.key("im").number(values(k).imag());
        w.key("residual").number(leaks[k]);
        w.endObject();
        lines << w.str() << "\n";
      }
      if (specOut.empty()) {
        std::cout << lines.str();
      } else {
        std::ofstream f(specOut, std::ios::binary);
        if (!f) fail(Errc::Config, "cannot open output path " + specOut);
        f << lines.str();
      }
      return kExitPass;
    }

    if (zvalue->parsed()) {
      ModelParams params =
          make_params(zL, parse_complex(zGamma), parse_complex_list(zMu), !zNoStrict);
      SpectralPoints points{parse_complex_list(zLambda)};
      const SpectrumTable table = diagonalize_auto(params);
      const auto rows = z_spectral_report(params, points, table);
      std::ostringstream lines;
      for (const auto& b : rows) {
        if (zBranch >= 0 && b.branch != zBranch) continue;
        JsonWriter w;
        w.beginObject();
        w.key("branch").integer(b.branch);
        w.key("kappa0").complexPair(b.kappa0);
        w.key("detH").complexPair(b.detH);
        w.key("Z").complexPair(b.z);
        w.key("conditionEstimate").number(b.conditionEstimate);
        w.endObject();
        lines << w.str() << "\n";
      }
      if (zOut.empty()) {
        std::cout << lines.str();
      } else {
        std::ofstream f(zOut, std::ios::binary);
        if (!f) fail(Errc::Config, "cannot open output path " + zOut);
        f << lines.str();
      }
      return kExitPass;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
