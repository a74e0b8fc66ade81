// cllab command-line entry point.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cllab/error.hpp"
#include "harness/commands.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace cllab::harness;

  CLI::App app{"cllab: class group statistics experiments"};
  app.require_subcommand(1);
  bool as_json = false, as_csv = false;
  std::string output;
  app.add_flag("--json", as_json, "emit JSON");
  app.add_flag("--csv", as_csv, "emit CSV");
  app.add_option("-o,--output", output, "write the report to this file");
  app.set_version_flag("--version", cllab::version());

  std::string cache = "clcache";
  bool no_cache = false;
  unsigned workers = 1;

  MomentsConfig mc;
  std::string mc_target, mc_pointed;
  double gap_tol = -1.0;
  auto* moments = app.add_subcommand("moments", "truncated moment sums of the Cohen-Lenstra measure");
  moments->add_option("--p", mc.p, "odd prime")->capture_default_str();
  moments->add_option("--u", mc.u, "u >= 0")->capture_default_str();
  auto* target_opt = moments->add_option("--target", mc_target, "group A, e.g. Z/3, Z/9xZ/3, trivial");
  auto* pointed_opt = moments->add_option("--pointed", mc_pointed, "pointed target A:a, e.g. Z/3:1");
  target_opt->excludes(pointed_opt);
  moments->add_option("--N", mc.n, "truncation log order")->capture_default_str();
  moments->add_option("--tol", mc.product_tol, "Euler product tolerance")->capture_default_str();
  moments->add_option("--gap-tol", gap_tol, "fail if the final gap exceeds this");

  SampleCommandConfig sc;
  std::uint64_t seed = 0;
  auto* sample = app.add_subcommand("sample", "sample random groups and compare with the exact measure");
  sample->add_option("--kind", sc.kind, "cokernel, process or pointed")->capture_default_str();
  sample->add_option("--p", sc.p)->capture_default_str();
  sample->add_option("--u", sc.u)->capture_default_str();
  sample->add_option("--n", sc.n, "matrix size")->capture_default_str();
  sample->add_option("--e", sc.e, "exponent cap")->capture_default_str();
  sample->add_option("--draws", sc.draws)->capture_default_str();
  auto* seed_opt = sample->add_option("--seed", seed, "RNG seed (required)");
  sample->add_option("--max-log", sc.max_log_order, "histogram cells up to p^max-log")->capture_default_str();
  sample->add_option("--level", sc.level, "chi-square level")->capture_default_str();
  sample->add_option("--workers", workers)->capture_default_str();

  FfScanConfig fc;
  std::vector<int> m_range;
  auto* ffscan = app.add_subcommand("ffscan", "scan quadratic function fields over F_q");
  ffscan->add_option("--q", fc.q, "prime")->capture_default_str();
  ffscan->add_option("--model", fc.model, "split, inert or ramified")->capture_default_str();
  ffscan->add_option("--deg", fc.degrees, "deg f values");
  ffscan->add_option("--m", m_range, "m range: MIN MAX")->expected(2);
  ffscan->add_option("--target", fc.targets, "A or A:a, e.g. Z/3 Z/3:1")->required();
  ffscan->add_option("--k", fc.torsion_k, "p^k-torsion for the joint table")->capture_default_str();
  ffscan->add_option("--max-order", fc.max_order, "|Pic0| budget per curve")->capture_default_str();
  ffscan->add_flag("--allow-non-coprime", fc.allow_non_coprime, "scan targets sharing a factor with q(q-1)");
  ffscan->add_option("--workers", workers)->capture_default_str();
  ffscan->add_option("--cache", cache, "cache directory")->capture_default_str();
  ffscan->add_flag("--no-cache", no_cache);

  NfScanConfig nc;
  std::int64_t v1 = 0;
  auto* nfscan = app.add_subcommand("nfscan", "scan quadratic number fields by discriminant");
  nfscan->add_option("--X", nc.x, "bound on |D|")->capture_default_str();
  nfscan->add_option("--sign", nc.sign, "imaginary, real or both")->capture_default_str();
  nfscan->add_option("--cond", nc.conditions, "local conditions v:split|inert|ramified[:class]");
  auto* v1_opt = nfscan->add_option("--v1", v1, "split prime for the pointed scan");
  nfscan->add_option("--steps", nc.trend_steps, "trend rows")->capture_default_str();
  nfscan->add_option("--density-tol", nc.density_tol, "relative tolerance of the density check")->capture_default_str();
  nfscan->add_option("--workers", workers)->capture_default_str();
  nfscan->add_option("--cache", cache, "cache directory")->capture_default_str();
  nfscan->add_flag("--no-cache", no_cache);

  PredictConfig pc;
  auto* predict = app.add_subcommand("predict", "exact predictions next to cached empirical values");
  predict->add_option("--p", pc.p)->capture_default_str();
  predict->add_option("--k", pc.k)->capture_default_str();
  predict->add_option("--N", pc.n)->capture_default_str();
  predict->add_option("--cache", cache, "cache directory")->capture_default_str();
  predict->add_flag("--no-cache", no_cache);

  auto* verify = app.add_subcommand("cache-verify", "check every cached record");
  verify->add_option("--cache", cache, "cache directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::optional<std::filesystem::path> cache_dir =
      no_cache ? std::nullopt : std::optional<std::filesystem::path>(cache);
  cllab::Report report;
  try {
    if (*moments) {
      if (target_opt->count()) mc.target = mc_target;
      if (pointed_opt->count()) mc.pointed = mc_pointed;
      if (gap_tol >= 0) mc.gap_tol = gap_tol;
      report = cmd_moments(mc);
    } else if (*sample) {
      if (seed_opt->count()) sc.seed = seed;
      sc.workers = workers;
      report = cmd_sample(sc);
    } else if (*ffscan) {
      if (!m_range.empty()) fc.m_range = std::make_pair(m_range[0], m_range[1]);
      fc.workers = workers;
      fc.cache_dir = cache_dir;
      report = cmd_ffscan(fc);
    } else if (*nfscan) {
      if (v1_opt->count()) nc.v1 = v1;
      nc.workers = workers;
      nc.cache_dir = cache_dir;
      report = cmd_nfscan(nc);
    } else if (*predict) {
      pc.cache_dir = cache_dir;
      report = cmd_predict(pc);
    } else if (*verify) {
      report = cmd_cache_verify(CacheVerifyConfig{cache});
    }
  } catch (const std::exception& e) {
    std::cerr << "cllab: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto format = as_json ? cllab::OutputFormat::Json : as_csv ? cllab::OutputFormat::Csv : cllab::OutputFormat::Text;
  if (output.empty()) {
    cllab::write_report(std::cout, report, format);
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "cllab: cannot write " << output << "\n";
      return kExitUsage;
    }
    cllab::write_report(out, report, format);
  }
  return report.passed() ? kExitOk : kExitInvariant;
}
