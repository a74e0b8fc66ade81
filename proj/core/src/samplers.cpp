#include "cllab/samplers.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <thread>

#include "cllab/error.hpp"
#include "cllab/smith.hpp"

namespace cllab {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

namespace {

void check_sampler_args(std::int64_t p, int u, int n, int e) {
  if (!is_odd_prime(p)) throw Error("sampler: p must be an odd prime");
  if (u < 0 || n < 1 || e < 1) throw Error("sampler: need u >= 0, n >= 1, e >= 1");
  if (ipow(p, e) > (std::int64_t(1) << 31)) throw Error("sampler: p^e too large");
}

}  // namespace

GroupType sample_mu_u(std::int64_t p, int u, int n, int e, Rng& rng) {
  check_sampler_args(p, u, n, e);
  const auto mod = static_cast<std::uint64_t>(ipow(p, e));
  const std::size_t rows = static_cast<std::size_t>(n);
  const std::size_t cols = static_cast<std::size_t>(n + u);
  std::vector<std::uint64_t> m(rows * cols);
  for (auto& x : m) x = rng.uniform(mod);
  std::vector<int> lambda;
  for (int k : local_smith_exponents(std::move(m), rows, cols, static_cast<std::uint64_t>(p), e)) {
    if (k > 0) lambda.push_back(k);
  }
  return GroupType::make(p, std::move(lambda));
}

std::vector<std::int64_t> uniform_element(const GroupType& a, Rng& rng) {
  std::vector<std::int64_t> c(a.lambda.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = static_cast<std::int64_t>(rng.uniform(static_cast<std::uint64_t>(a.component_order(i))));
  }
  return c;
}

GroupType sample_mu_u_process(std::int64_t p, int u, int n, int e, Rng& rng) {
  check_sampler_args(p, u, n, e);
  GroupType g = sample_mu_u(p, 0, n, e, rng);
  if (u == 0) return g;
  std::vector<GroupElement> gs;
  for (int i = 0; i < u; ++i) gs.push_back(GroupElement{g, uniform_element(g, rng)});
  return quotient_by_elements(g, gs);
}

PointedClass sample_pointed(std::int64_t p, int n, int e, Rng& rng) {
  GroupType b = sample_mu_u(p, 0, n, e, rng);
  return canonicalize(b, uniform_element(b, rng));
}

namespace {

template <class Key, class Draw>
std::map<Key, std::uint64_t> run_chunks(const SampleConfig& cfg, Draw draw) {
  const std::uint64_t chunks = (cfg.draws + kSampleChunk - 1) / kSampleChunk;
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::max<std::uint64_t>(chunks, 1))));
  std::vector<std::map<Key, std::uint64_t>> partial(workers);
  auto job = [&](unsigned w) {
    for (std::uint64_t c = w; c < chunks; c += workers) {
      Rng rng(cfg.seed, c);
      const std::uint64_t begin = c * kSampleChunk;
      const std::uint64_t end = std::min(cfg.draws, begin + kSampleChunk);
      for (std::uint64_t i = begin; i < end; ++i) ++partial[w][draw(rng)];
    }
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(job, w);
    for (auto& t : threads) t.join();
  }
  std::map<Key, std::uint64_t> total;
  for (auto& part : partial) {
    for (auto& [k, v] : part) total[k] += v;
  }
  return total;
}

}  // namespace

std::map<GroupType, std::uint64_t> sample_histogram(const SampleConfig& cfg) {
  check_sampler_args(cfg.p, cfg.u, cfg.n, cfg.e);
  switch (cfg.kind) {
    case SamplerKind::Cokernel:
      return run_chunks<GroupType>(cfg, [&](Rng& r) { return sample_mu_u(cfg.p, cfg.u, cfg.n, cfg.e, r); });
    case SamplerKind::Process:
      return run_chunks<GroupType>(cfg, [&](Rng& r) { return sample_mu_u_process(cfg.p, cfg.u, cfg.n, cfg.e, r); });
    case SamplerKind::Pointed:
      break;
  }
  throw Error("sample_histogram: use sample_pointed_histogram for pointed draws");
}

std::map<PointedClass, std::uint64_t> sample_pointed_histogram(const SampleConfig& cfg) {
  check_sampler_args(cfg.p, 0, cfg.n, cfg.e);
  return run_chunks<PointedClass>(cfg, [&](Rng& r) { return sample_pointed(cfg.p, cfg.n, cfg.e, r); });
}

namespace {

ChiSquareResult finish_chi(double stat, int dof, double level) {
  ChiSquareResult out;
  out.statistic = stat;
  out.dof = dof;
  if (dof <= 0) {
    out.pass = true;
    return out;
  }
  boost::math::chi_squared dist(dof);
  out.critical = boost::math::quantile(boost::math::complement(dist, level));
  out.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  out.pass = stat <= out.critical;
  return out;
}

}  // namespace

ChiSquareResult chi_square(const std::vector<std::uint64_t>& observed,
                           const std::vector<double>& probabilities, double level) {
  if (observed.size() != probabilities.size()) throw Error("chi_square: size mismatch");
  double total = 0;
  for (auto o : observed) total += static_cast<double>(o);
  // Cells with expected count below kMinExpected are pooled into one cell.
  std::vector<double> obs, expect;
  double pooled_obs = 0, pooled_exp = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double ex = probabilities[i] * total;
    if (ex <= 0 && observed[i] != 0) throw Error("chi_square: observation in a zero-probability category");
    if (ex < kMinExpected) {
      pooled_obs += static_cast<double>(observed[i]);
      pooled_exp += ex;
    } else {
      obs.push_back(static_cast<double>(observed[i]));
      expect.push_back(ex);
    }
  }
  if (pooled_exp > 0) {
    if (pooled_exp < kMinExpected && !obs.empty()) {
      obs.back() += pooled_obs;
      expect.back() += pooled_exp;
    } else {
      obs.push_back(pooled_obs);
      expect.push_back(pooled_exp);
    }
  }
  double stat = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double d = obs[i] - expect[i];
    stat += d * d / expect[i];
  }
  return finish_chi(stat, static_cast<int>(obs.size()) - 1, level);
}

ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b, double level) {
  if (a.size() != b.size()) throw Error("chi_square_two_sample: size mismatch");
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) na += static_cast<double>(a[i]), nb += static_cast<double>(b[i]);
  double stat = 0;
  int used = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double row = static_cast<double>(a[i] + b[i]);
    if (row == 0) continue;
    const double ea = row * na / (na + nb), eb = row * nb / (na + nb);
    stat += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
    ++used;
  }
  return finish_chi(stat, used - 1, level);
}

}  // namespace cllab
