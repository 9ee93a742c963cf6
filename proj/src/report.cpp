#include "sixvertex/report.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "sixvertex/chain.hpp"
#include "sixvertex/jsonwriter.hpp"
#include "sixvertex/oracle.hpp"
#include "sixvertex/spectral.hpp"
#include "sixvertex/transfer.hpp"

namespace sixvertex {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Complex Rng::complexIn(double reLo, double reHi, double imLo, double imHi) {
  const double re = uniform(reLo, reHi);
  const double im = uniform(imLo, imHi);
  return {re, im};
}

int Rng::below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

namespace {

double rel_diff(Complex a, Complex b) {
  if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b)))
    return std::numeric_limits<double>::infinity();
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

struct PointInput {
  Complex gamma{};
  std::vector<Complex> mu;
  std::vector<Complex> lambda;
};

std::vector<Complex> sample_separated(Rng& rng, int n, const SamplingBox& box, double tol) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Complex> out;
    out.reserve(n);
    for (int t = 0; t < n; ++t)
      out.push_back(rng.complexIn(box.pointReMin, box.pointReMax, box.pointImMin, box.pointImMax));
    if (min_separation(out) >= tol) return out;
  }
  fail(Errc::Separation, "could not sample separated parameters inside the box");
}

PointInput sample_point(Rng& rng, int L, const SweepConfig& cfg) {
  PointInput in;
  in.gamma = cfg.fixedGamma ? *cfg.fixedGamma
                            : rng.complexIn(cfg.box.gammaReMin, cfg.box.gammaReMax,
                                            cfg.box.gammaImMin, cfg.box.gammaImMax);
  if (cfg.strictSeparation) {
    in.mu = sample_separated(rng, L, cfg.box, kDefaultSeparationTol);
    in.lambda = sample_separated(rng, L, cfg.box, kDefaultSeparationTol);
  } else {
    // deliberate near-degenerate studies sample without rejection; pieces
    // that hit a SEPARATION guard get recorded as skips
    for (int t = 0; t < L; ++t)
      in.mu.push_back(
          rng.complexIn(cfg.box.pointReMin, cfg.box.pointReMax, cfg.box.pointImMin,
                        cfg.box.pointImMax));
    for (int t = 0; t < L; ++t)
      in.lambda.push_back(
          rng.complexIn(cfg.box.pointReMin, cfg.box.pointReMax, cfg.box.pointImMin,
                        cfg.box.pointImMax));
  }
  return in;
}

PointReport evaluate_battery(int index, int L, const PointInput& in, const SweepConfig& cfg,
                             Rng& rng) {
  PointReport r;
  r.index = index;
  r.L = L;
  r.gamma = in.gamma;
  r.mu = in.mu;
  r.lambda = in.lambda;

  ModelParams params(L, in.gamma, in.mu, cfg.strictSeparation);
  SpectralPoints points{in.lambda};
  SpectrumTable table = diagonalize_auto(params);  // DEGENERATE_SPECTRUM escapes to resample
  r.spectrumCondition = table.conditioning;

  const Complex zc = z_contract(params, points).value;
  if (L <= kMaxEnumerateLength) {
    const Complex ze = z_enumerate(params, points).value;
    r.triangleEnumContract = rel_diff(ze, zc);
    try {
      const Complex zi = z_izergin(params, points).value;
      r.triangleContractIzergin = rel_diff(zc, zi);
      r.triangleEnumIzergin = rel_diff(ze, zi);
    } catch (const Error& e) {
      if (e.code() != Errc::Separation && e.code() != Errc::PoleProximity) throw;
      r.skips.push_back(std::string("izergin: ") + e.what());
    }
  } else {
    try {
      r.triangleContractIzergin = rel_diff(zc, z_izergin(params, points).value);
    } catch (const Error& e) {
      if (e.code() != Errc::Separation && e.code() != Errc::PoleProximity) throw;
      r.skips.push_back(std::string("izergin: ") + e.what());
    }
  }

  std::vector<Complex> zFromBranches;
  try {
    const auto branches = z_spectral_report(params, points, table);
    for (const auto& b : branches) {
      r.kappa0.push_back(b.kappa0);
      const double res = rel_diff(b.z, zc);
      r.zResidualPerBranch.push_back(res);
      r.zResidualMax = std::max(r.zResidualMax, res);
      r.hConditionMax = std::max(r.hConditionMax, b.conditionEstimate);
      zFromBranches.push_back(b.z);
    }
  } catch (const Error& e) {
    if (e.code() != Errc::Separation && e.code() != Errc::PoleProximity &&
        e.code() != Errc::EigenvalueZeroAtMu)
      throw;
    r.skips.push_back(std::string("z_spectral: ") + e.what());
  }
  if (zFromBranches.size() >= 2) {
    std::vector<double> mags;
    for (const Complex& z : zFromBranches) mags.push_back(std::abs(z));
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    const double median = mags[mags.size() / 2];
    if (median > 0 && std::isfinite(median)) {
      for (std::size_t a = 0; a < zFromBranches.size(); ++a)
        for (std::size_t b = a + 1; b < zFromBranches.size(); ++b)
          r.branchInvariance = std::max(
              r.branchInvariance, std::abs(zFromBranches[a] - zFromBranches[b]) / median);
    } else {
      r.branchInvariance = std::numeric_limits<double>::infinity();
    }
  }

  for (int n = 2; n <= L; ++n) {
    try {
      ChainEvaluator chain(table, ChainConfig{0, Complex{1.0}});
      std::vector<Complex> tuple(in.lambda.begin(), in.lambda.begin() + n);
      r.symmetryResiduals.emplace_back(n, chain.symmetry_residual(tuple));
    } catch (const Error& e) {
      if (e.code() != Errc::Separation && e.code() != Errc::PoleProximity) throw;
      r.skips.push_back("symmetry n=" + std::to_string(n) + ": " + e.what());
    }
  }

  // recurrence at a random specialization lambda_i = mu_j - gamma
  bool korepinDone = false;
  for (int attempt = 0; attempt < 8 && !korepinDone; ++attempt) {
    const int i = rng.below(L);
    const int j = rng.below(L);
    std::vector<Complex> special = in.lambda;
    special[i] = params.mu[j] - params.gamma;
    if (min_separation(special) < params.separationTol) continue;
    try {
      const KorepinCheck kc = korepin_check(params, SpectralPoints{special}, i, j);
      r.korepin = {i,
                   j,
                   kc.residualPinned,
                   kc.residualPrinted,
                   kc.residualPrinted <= cfg.tol.endToEnd,
                   kc.factorPinned,
                   kc.factorPrinted};
      korepinDone = true;
    } catch (const Error& e) {
      if (e.code() != Errc::Separation && e.code() != Errc::PoleProximity) throw;
    }
  }
  if (!korepinDone) r.skips.push_back("korepin: no admissible specialization found");

  const double triangleMax = std::max(
      {r.triangleEnumContract, r.triangleContractIzergin, r.triangleEnumIzergin});
  double symMax = 0.0;
  for (const auto& [n, v] : r.symmetryResiduals) symMax = std::max(symMax, v);
  const bool pass = triangleMax <= cfg.tol.closedForm && r.zResidualMax <= cfg.tol.endToEnd &&
                    r.branchInvariance <= cfg.tol.endToEnd && symMax <= cfg.tol.endToEnd &&
                    (!korepinDone || r.korepin.residualPinned <= cfg.tol.endToEnd);
  r.verdict = pass ? "PASS" : "FAIL";
  return r;
}

PointReport run_point(int index, const SweepConfig& cfg) {
  const int L = cfg.Lmin + index / cfg.trials;
  Rng rng(splitmix64(cfg.seed) + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(index + 1));
  int resamples = 0;
  for (int attempt = 0; attempt <= cfg.maxResampleAttempts; ++attempt) {
    PointInput in = sample_point(rng, L, cfg);
    try {
      PointReport r = evaluate_battery(index, L, in, cfg, rng);
      r.resamples = resamples;
      return r;
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateSpectrum && e.code() != Errc::Separation) throw;
      ++resamples;
    }
  }
  PointReport r;
  r.index = index;
  r.L = L;
  r.resamples = resamples;
  r.exhausted = true;
  r.verdict = "SKIP";
  r.skips.push_back("degeneracy retries exhausted");
  return r;
}

struct Summary {
  int total = 0, pass = 0, failCount = 0, skip = 0, resamples = 0, exhausted = 0;
  double maxTriangle = 0, maxZ = 0, maxInvariance = 0, maxSymmetry = 0, maxKorepin = 0;
};

Summary summarize(const std::vector<PointReport>& points) {
  Summary s;
  s.total = static_cast<int>(points.size());
  for (const auto& p : points) {
    if (p.verdict == "PASS") ++s.pass;
    else if (p.verdict == "FAIL") ++s.failCount;
    else ++s.skip;
    s.resamples += p.resamples;
    if (p.exhausted) ++s.exhausted;
    s.maxTriangle = std::max({s.maxTriangle, p.triangleEnumContract, p.triangleContractIzergin,
                              p.triangleEnumIzergin});
    s.maxZ = std::max(s.maxZ, p.zResidualMax);
    s.maxInvariance = std::max(s.maxInvariance, p.branchInvariance);
    for (const auto& [n, v] : p.symmetryResiduals) s.maxSymmetry = std::max(s.maxSymmetry, v);
    s.maxKorepin = std::max(s.maxKorepin, p.korepin.residualPinned);
  }
  return s;
}

void write_summary(JsonWriter& w, const Summary& s) {
  w.beginObject();
  w.key("points_total").integer(s.total);
  w.key("points_pass").integer(s.pass);
  w.key("points_fail").integer(s.failCount);
  w.key("points_skip").integer(s.skip);
  w.key("resamples").integer(s.resamples);
  w.key("degeneracy_exhausted").integer(s.exhausted);
  w.key("max_oracle_triangle").number(s.maxTriangle);
  w.key("max_z_residual").number(s.maxZ);
  w.key("max_branch_invariance").number(s.maxInvariance);
  w.key("max_symmetry_residual").number(s.maxSymmetry);
  w.key("max_korepin_residual").number(s.maxKorepin);
  w.key("verdict").string(s.failCount == 0 && s.exhausted == 0 ? "PASS" : "FAIL");
  w.endObject();
}

void write_config(JsonWriter& w, const SweepConfig& cfg) {
  w.beginObject();
  w.key("L_min").integer(cfg.Lmin);
  w.key("L_max").integer(cfg.Lmax);
  w.key("trials").integer(cfg.trials);
  w.key("seed").integer(static_cast<std::int64_t>(cfg.seed));
  w.key("tolerances").beginObject();
  w.key("closed_form").number(cfg.tol.closedForm);
  w.key("end_to_end").number(cfg.tol.endToEnd);
  w.endObject();
  w.key("box").beginObject();
  w.key("gamma_re").beginArray().number(cfg.box.gammaReMin).number(cfg.box.gammaReMax).endArray();
  w.key("gamma_im").beginArray().number(cfg.box.gammaImMin).number(cfg.box.gammaImMax).endArray();
  w.key("point_re").beginArray().number(cfg.box.pointReMin).number(cfg.box.pointReMax).endArray();
  w.key("point_im").beginArray().number(cfg.box.pointImMin).number(cfg.box.pointImMax).endArray();
  w.endObject();
  w.key("strict_separation").boolean(cfg.strictSeparation);
  w.key("gamma_fixed");
  if (cfg.fixedGamma)
    w.complexPair(*cfg.fixedGamma);
  else
    w.null();
  w.endObject();
}

void write_point(JsonWriter& w, const PointReport& p) {
  w.beginObject();
  w.key("index").integer(p.index);
  w.key("L").integer(p.L);
  w.key("gamma").complexPair(p.gamma);
  w.key("mu").beginArray();
  for (const Complex& m : p.mu) w.complexPair(m);
  w.endArray();
  w.key("lambda").beginArray();
  for (const Complex& l : p.lambda) w.complexPair(l);
  w.endArray();
  w.key("resamples").integer(p.resamples);
  w.key("skips").beginArray();
  for (const auto& s : p.skips) w.string(s);
  w.endArray();
  w.key("oracle_triangle").beginObject();
  w.key("enum_vs_contract").number(p.triangleEnumContract);
  w.key("contract_vs_izergin").number(p.triangleContractIzergin);
  w.key("enum_vs_izergin").number(p.triangleEnumIzergin);
  w.endObject();
  w.key("kappa0").beginArray();
  for (const Complex& k : p.kappa0) w.complexPair(k);
  w.endArray();
  w.key("z_residual_per_branch").beginArray();
  for (double v : p.zResidualPerBranch) w.number(v);
  w.endArray();
  w.key("z_residual_max").number(p.zResidualMax);
  w.key("branch_invariance").number(p.branchInvariance);
  w.key("symmetry_residuals").beginArray();
  for (const auto& [n, v] : p.symmetryResiduals) {
    w.beginObject();
    w.key("n").integer(n);
    w.key("value").number(v);
    w.endObject();
  }
  w.endArray();
  w.key("korepin").beginObject();
  w.key("i").integer(p.korepin.i);
  w.key("j").integer(p.korepin.j);
  w.key("residual_pinned").number(p.korepin.residualPinned);
  w.key("residual_printed").number(p.korepin.residualPrinted);
  w.key("printed_form_agrees").boolean(p.korepin.printedFormAgrees);
  w.key("factor_pinned").complexPair(p.korepin.factorPinned);
  w.key("factor_printed").complexPair(p.korepin.factorPrinted);
  w.endObject();
  w.key("condition").beginObject();
  w.key("spectrum").number(p.spectrumCondition);
  w.key("h_max").number(p.hConditionMax);
  w.endObject();
  w.key("verdict").string(p.verdict);
  w.endObject();
}

}  // namespace

int VerificationReport::passCount() const {
  int n = 0;
  for (const auto& p : points) n += p.verdict == "PASS";
  return n;
}
int VerificationReport::failCount() const {
  int n = 0;
  for (const auto& p : points) n += p.verdict == "FAIL";
  return n;
}
int VerificationReport::skipCount() const {
  int n = 0;
  for (const auto& p : points) n += p.verdict == "SKIP";
  return n;
}
int VerificationReport::exhaustedCount() const {
  int n = 0;
  for (const auto& p : points) n += p.exhausted;
  return n;
}
bool VerificationReport::pass() const { return failCount() == 0 && exhaustedCount() == 0; }

std::string VerificationReport::to_json() const {
  JsonWriter w;
  w.beginObject();
  w.key("schema").string("vertex-spectra-report-v1");
  w.key("kind").string("verify");
  w.key("config");
  write_config(w, config);
  w.key("points").beginArray();
  for (const auto& p : points) write_point(w, p);
  w.endArray();
  w.key("summary");
  write_summary(w, summarize(points));
  w.endObject();
  return w.str();
}

std::string VerificationReport::to_csv() const {
  std::string out =
      "index,L,verdict,resamples,skips,oracle_triangle_max,z_residual_max,branch_invariance,"
      "symmetry_max,korepin_pinned,spectrum_condition,h_condition_max\n";
  for (const auto& p : points) {
    const double triangleMax = std::max(
        {p.triangleEnumContract, p.triangleContractIzergin, p.triangleEnumIzergin});
    double symMax = 0.0;
    for (const auto& [n, v] : p.symmetryResiduals) symMax = std::max(symMax, v);
    out += std::to_string(p.index) + "," + std::to_string(p.L) + "," + p.verdict + "," +
           std::to_string(p.resamples) + "," + std::to_string(p.skips.size()) + "," +
           format_double_17(triangleMax) + "," + format_double_17(p.zResidualMax) + "," +
           format_double_17(p.branchInvariance) + "," + format_double_17(symMax) + "," +
           format_double_17(p.korepin.residualPinned) + "," +
           format_double_17(p.spectrumCondition) + "," + format_double_17(p.hConditionMax) +
           "\n";
  }
  return out;
}

VerificationReport run_verify(const SweepConfig& config) {
  if (config.Lmin < 2 || config.Lmax < config.Lmin)
    fail(Errc::Config, "verify needs 2 <= Lmin <= Lmax");
  if (config.trials < 1) fail(Errc::Config, "verify needs at least one trial");
  if (config.Lmax > kMaxContractLength)
    fail(Errc::Config, "verify limited to L <= " + std::to_string(kMaxContractLength));

  const int total = (config.Lmax - config.Lmin + 1) * config.trials;
  VerificationReport report;
  report.config = config;
  report.points.resize(total);

  std::atomic<int> cursor{0};
  const int workers =
      std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()), total));
  std::vector<std::thread> pool;
  std::exception_ptr firstError;
  std::mutex errorMutex;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int i = cursor.fetch_add(1);
        if (i >= total) break;
        try {
          report.points[i] = run_point(i, config);
        } catch (...) {
          std::lock_guard lock(errorMutex);
          if (!firstError) firstError = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (firstError) std::rethrow_exception(firstError);
  return report;
}

SweepFileConfig parse_sweep_config(const std::string& jsonText) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(jsonText);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Config, std::string("config parse error: ") + e.what());
  }
  auto need = [&](const char* field) -> const nlohmann::json& {
    if (!doc.contains(field)) fail(Errc::Config, std::string("missing config field '") + field + "'");
    return doc.at(field);
  };
  auto asComplex = [](const nlohmann::json& v) -> Complex {
    if (!v.is_array() || v.size() != 2)
      fail(Errc::Config, "complex values must be two-element arrays [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
  };

  SweepFileConfig cfg;
  try {
    for (const auto& g : need("gammas")) cfg.gammas.push_back(asComplex(g));
    for (const auto& l : need("Ls")) cfg.Ls.push_back(l.get<int>());
    cfg.trials = need("trials").get<int>();
    cfg.seed = need("seed").get<std::uint64_t>();
    if (doc.contains("tolerances")) {
      const auto& t = doc.at("tolerances");
      if (t.contains("closed_form")) cfg.tol.closedForm = t.at("closed_form").get<double>();
      if (t.contains("end_to_end")) cfg.tol.endToEnd = t.at("end_to_end").get<double>();
    }
    if (doc.contains("strict_separation"))
      cfg.strictSeparation = doc.at("strict_separation").get<bool>();
    if (doc.contains("box")) {
      const auto& b = doc.at("box");
      auto pair = [&](const char* key, double& lo, double& hi) {
        if (!b.contains(key)) return;
        lo = b.at(key)[0].get<double>();
        hi = b.at(key)[1].get<double>();
      };
      pair("gamma_re", cfg.box.gammaReMin, cfg.box.gammaReMax);
      pair("gamma_im", cfg.box.gammaImMin, cfg.box.gammaImMax);
      pair("point_re", cfg.box.pointReMin, cfg.box.pointReMax);
      pair("point_im", cfg.box.pointImMin, cfg.box.pointImMax);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Config, std::string("config field error: ") + e.what());
  }
  if (cfg.gammas.empty()) fail(Errc::Config, "config field 'gammas' must be non-empty");
  if (cfg.Ls.empty()) fail(Errc::Config, "config field 'Ls' must be non-empty");
  return cfg;
}

bool SweepReport::pass() const {
  for (const auto& row : rows)
    if (!row.report.pass()) return false;
  return true;
}

SweepReport run_sweep(const SweepFileConfig& config) {
  SweepReport out;
  out.config = config;
  int cell = 0;
  for (const Complex& gamma : config.gammas) {
    for (int L : config.Ls) {
      SweepConfig cfg;
      cfg.Lmin = cfg.Lmax = L;
      cfg.trials = config.trials;
      cfg.seed = splitmix64(config.seed + static_cast<std::uint64_t>(cell));
      cfg.tol = config.tol;
      cfg.box = config.box;
      cfg.strictSeparation = config.strictSeparation;
      cfg.fixedGamma = gamma;
      out.rows.push_back({gamma, L, run_verify(cfg)});
      ++cell;
    }
  }
  return out;
}

std::string SweepReport::to_json() const {
  JsonWriter w;
  w.beginObject();
  w.key("schema").string("vertex-spectra-report-v1");
  w.key("kind").string("sweep");
  w.key("config").beginObject();
  w.key("gammas").beginArray();
  for (const Complex& g : config.gammas) w.complexPair(g);
  w.endArray();
  w.key("Ls").beginArray();
  for (int l : config.Ls) w.integer(l);
  w.endArray();
  w.key("trials").integer(config.trials);
  w.key("seed").integer(static_cast<std::int64_t>(config.seed));
  w.key("strict_separation").boolean(config.strictSeparation);
  w.endObject();
  w.key("rows").beginArray();
  for (const auto& row : rows) {
    w.beginObject();
    w.key("gamma").complexPair(row.gamma);
    w.key("L").integer(row.L);
    w.key("summary");
    write_summary(w, summarize(row.report.points));
    w.endObject();
  }
  w.endArray();
  w.key("summary").beginObject();
  w.key("rows_total").integer(static_cast<std::int64_t>(rows.size()));
  int pass = 0;
  for (const auto& row : rows) pass += row.report.pass();
  w.key("rows_pass").integer(pass);
  w.key("verdict").string(pass == static_cast<int>(rows.size()) ? "PASS" : "FAIL");
  w.endObject();
  w.endObject();
  return w.str();
}

std::string SweepReport::to_csv() const {
  std::string out = "gamma_re,gamma_im,L,verdict,points_pass,points_fail,max_z_residual\n";
  for (const auto& row : rows) {
    const Summary s = summarize(row.report.points);
    out += format_double_17(row.gamma.real()) + "," + format_double_17(row.gamma.imag()) + "," +
           std::to_string(row.L) + "," + (row.report.pass() ? "PASS" : "FAIL") + "," +
           std::to_string(s.pass) + "," + std::to_string(s.failCount) + "," +
           format_double_17(s.maxZ) + "\n";
  }
  return out;
}

}  // namespace sixvertex
