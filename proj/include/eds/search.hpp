// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive tuple search: u2 = alpha in S+, u3 = beta in S, u4 = alpha*gamma
// for gamma in S, so u2 | u4 by construction.  Each tuple's window is doubled
// I times; tuples with a zero E-term or a fully absorbed gcd are discarded as
// torsion, and 0 < h~ < H survivors go through recovery, torsion screening,
// a refined estimate, and the T-adic cross-check.
//
// Work is sharded over disjoint alpha ranges; workers share nothing mutable
// and commit per-alpha results (stats + candidate records) under one lock,
// which is also the checkpoint granularity.  Hits are deduplicated at
// reporting time only, by (D, j, rounded height) and by conjugate class, and
// sorted by refined height then tuple, so the result is independent of thread
// count, sharding, and resume points.

#ifndef EDS_SEARCH_HPP
#define EDS_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "eds/heights.hpp"
#include "eds/records.hpp"
#include "eds/recovery.hpp"

namespace eds {

struct ShardSpec {
  unsigned index = 0;
  unsigned count = 1;
};

struct SearchConfig {
  std::vector<long long> fields;
  long c = 2;
  double height_bound = 0.01;
  int iters = 6;
  int refine_iters = 7;
  ShardSpec shard;
  unsigned threads = 0;  // 0 = hardware concurrency
  long early_abort_at = 0;  // 0 = off; else an intermediate index 4 <= n < 2^(iters+1)
  bool with_full_estimate = true;
  std::string checkpoint_path;
  std::function<bool()> cancel;               // polled inside the tuple loop
  std::function<void(const std::string&)> progress;
};

inline void validate_config(const SearchConfig& cfg) {
  if (cfg.fields.empty()) throw ConfigError("at least one field D is required");
  if (cfg.c < 1) throw ConfigError("box bound c must be >= 1");
  if (!(cfg.height_bound > 0.0)) throw ConfigError("height bound must be positive");
  if (cfg.iters < 1) throw ConfigError("iteration bound I must be >= 1");
  if (cfg.refine_iters < 1) throw ConfigError("refine iteration bound must be >= 1");
  if (cfg.shard.count < 1 || cfg.shard.index >= cfg.shard.count)
    throw ConfigError("shard index/count out of range");
  if (cfg.early_abort_at != 0) {
    long n = cfg.early_abort_at;
    if (n < 4 || (n & (n - 1)) != 0 || n >= (1L << (cfg.iters + 1)))
      throw ConfigError("early abort index must be a power of two in [4, 2^(I+1))");
  }
  for (long long d : cfg.fields) FieldSpec::make(d);
}

// --- enumeration -----------------------------------------------------------

inline std::uint64_t S_size(long c) {
  std::uint64_t m = 2 * static_cast<std::uint64_t>(c) + 1;
  return m * m - 1;
}

inline std::uint64_t S_plus_size(long c) {
  return 2 * static_cast<std::uint64_t>(c) * (static_cast<std::uint64_t>(c) + 1);
}

inline std::uint64_t tuples_per_field(long c) {
  return S_plus_size(c) * S_size(c) * S_size(c);
}

/// S = {x+yw : 0 < max(|x|,|y|) <= c}, ordered by x then y.
inline std::vector<RingElem> enum_S(long c) {
  std::vector<RingElem> out;
  out.reserve(S_size(c));
  for (long x = -c; x <= c; ++x)
    for (long y = -c; y <= c; ++y)
      if (x != 0 || y != 0) out.emplace_back(x, y);
  return out;
}

/// S+ = {x+yw : 1 <= x <= c, -c <= y <= c} plus {yw : 1 <= y <= c},
/// ordered by x then y.
inline std::vector<RingElem> enum_S_plus(long c) {
  std::vector<RingElem> out;
  out.reserve(S_plus_size(c));
  for (long y = 1; y <= c; ++y) out.emplace_back(0, y);
  for (long x = 1; x <= c; ++x)
    for (long y = -c; y <= c; ++y) out.emplace_back(x, y);
  return out;
}

/// Contiguous near-equal chunks [begin, end) of the S+ index range, one per
/// shard; their union is the whole range and they are pairwise disjoint.
inline std::vector<std::pair<std::size_t, std::size_t>> partition_work(const SearchConfig& cfg) {
  validate_config(cfg);
  std::size_t n = static_cast<std::size_t>(S_plus_size(cfg.c));
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (unsigned i = 0; i < cfg.shard.count; ++i)
    out.emplace_back(i * n / cfg.shard.count, (i + 1) * n / cfg.shard.count);
  return out;
}

// --- summary ----------------------------------------------------------------

struct FieldStats {
  std::uint64_t tested = 0, torsion = 0, candidates = 0, errors = 0, pruned = 0;
};

struct SearchSummary {
  std::map<long long, FieldStats> per_field;
  std::uint64_t tested = 0, torsion_discarded = 0, candidates = 0, verified_hits = 0,
                errors = 0, pruned = 0;
  double wall_seconds = 0.0, cpu_seconds = 0.0;
  bool completed = true;
  std::vector<HitRecord> raw;   // candidate records in commit order
  std::vector<HitRecord> hits;  // deduplicated verified hits, sorted
};

using RecordSink = std::function<void(const HitRecord&)>;

// --- checkpointing ----------------------------------------------------------

inline std::string config_hash(const SearchConfig& cfg) {
  std::string s = "v1;fields=";
  for (long long d : cfg.fields) s += std::to_string(d) + ",";
  char buf[64];
  snprintf(buf, sizeof(buf), ";c=%ld;H=%.17g;I=%d;R=%d;shard=%u/%u;abort=%ld", cfg.c,
           cfg.height_bound, cfg.iters, cfg.refine_iters, cfg.shard.index, cfg.shard.count,
           cfg.early_abort_at);
  s += buf;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

struct AlphaKey {
  long long d;
  std::string alpha;
  bool operator<(const AlphaKey& o) const {
    return d != o.d ? d < o.d : alpha < o.alpha;
  }
};

struct CheckpointState {
  std::set<AlphaKey> done;
  std::map<long long, FieldStats> per_field;
  std::vector<HitRecord> records;
};

inline CheckpointState load_checkpoint(const std::string& path, const std::string& want_hash) {
  CheckpointState st;
  std::ifstream in(path);
  if (!in) return st;
  std::string line;
  bool have_header = false;
  std::vector<std::string> lines;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    nlohmann::json j = nlohmann::json::parse(lines[i], nullptr, false);
    if (j.is_discarded()) {
      // a torn final line is the expected kill artifact; anything earlier
      // means real corruption
      if (i + 1 == lines.size() && have_header) break;
      throw CorruptCheckpointError("unparseable checkpoint line " + std::to_string(i + 1));
    }
    try {
      if (i == 0) {
        if (j.at("format") != "edsearch-checkpoint" || j.at("version") != 1)
          throw CorruptCheckpointError("unrecognized checkpoint header");
        if (j.at("cfg_hash").get<std::string>() != want_hash)
          throw CorruptCheckpointError("checkpoint was written by a different configuration");
        have_header = true;
        continue;
      }
      AlphaKey key{j.at("d").get<long long>(), j.at("alpha").get<std::string>()};
      FieldStats fs;
      const auto& s = j.at("stats");
      fs.tested = s.at("tested").get<std::uint64_t>();
      fs.torsion = s.at("torsion").get<std::uint64_t>();
      fs.candidates = s.at("candidates").get<std::uint64_t>();
      fs.errors = s.at("errors").get<std::uint64_t>();
      fs.pruned = s.at("pruned").get<std::uint64_t>();
      std::vector<HitRecord> recs;
      for (const auto& rj : j.at("records")) recs.push_back(record_from_json(rj));
      if (!st.done.insert(key).second) continue;  // duplicate commit, keep first
      auto& agg = st.per_field[key.d];
      agg.tested += fs.tested;
      agg.torsion += fs.torsion;
      agg.candidates += fs.candidates;
      agg.errors += fs.errors;
      agg.pruned += fs.pruned;
      for (auto& r : recs) st.records.push_back(std::move(r));
    } catch (const nlohmann::json::exception&) {
      if (i + 1 == lines.size() && have_header) break;
      throw CorruptCheckpointError("malformed checkpoint line " + std::to_string(i + 1));
    }
  }
  if (!lines.empty() && !have_header)
    throw CorruptCheckpointError("checkpoint has no valid header");
  return st;
}

}  // namespace detail

// --- dedup ------------------------------------------------------------------

/// Reporting-time deduplication: sorts verified candidates by refined height
/// then tuple, merges equal (D, j, rounded height) classes and conjugate
/// tuples, and returns the kept representatives with their class members.
inline std::vector<HitRecord> finalize_hits(const std::vector<HitRecord>& raw) {
  std::vector<const HitRecord*> verified;
  for (const auto& r : raw)
    if (r.verified_all() && r.h_refined) verified.push_back(&r);
  std::sort(verified.begin(), verified.end(), [](const HitRecord* a, const HitRecord* b) {
    if (*a->h_refined != *b->h_refined) return *a->h_refined < *b->h_refined;
    if (a->d != b->d) return a->d < b->d;
    if (a->u2 != b->u2) return a->u2 < b->u2;
    if (a->u3 != b->u3) return a->u3 < b->u3;
    return a->u4 < b->u4;
  });

  std::vector<HitRecord> hits;
  std::map<std::string, std::size_t> by_key;     // (d, j, rounded h) -> hit index
  std::map<std::string, std::size_t> by_tuple;   // tuple string -> hit index
  for (const HitRecord* rp : verified) {
    const HitRecord& r = *rp;
    std::string tuple_str = std::to_string(r.d) + ":" + r.u2 + ";" + r.u3 + ";" + r.u4;
    FieldSpec F = FieldSpec::make(r.d);
    std::string conj_str = std::to_string(r.d) + ":" + format_elem(conj(parse_elem(r.u2), F)) +
                           ";" + format_elem(conj(parse_elem(r.u3), F)) + ";" +
                           format_elem(conj(parse_elem(r.u4), F));
    char keybuf[64];
    snprintf(keybuf, sizeof(keybuf), "%lld|%lld", r.d,
             static_cast<long long>(llround(*r.h_refined * 1e6)));
    std::string key = std::string(keybuf) + "|" + r.j;

    auto ct = by_tuple.find(conj_str);
    if (ct != by_tuple.end()) {
      hits[ct->second].class_members.push_back(tuple_str);
      by_tuple.emplace(tuple_str, ct->second);
      continue;
    }
    auto kt = by_key.find(key);
    if (kt != by_key.end()) {
      hits[kt->second].class_members.push_back(tuple_str);
      by_tuple.emplace(tuple_str, kt->second);
      continue;
    }
    HitRecord h = r;
    h.kind = "hit";
    h.class_members = {tuple_str};
    hits.push_back(std::move(h));
    by_key.emplace(key, hits.size() - 1);
    by_tuple.emplace(tuple_str, hits.size() - 1);
  }
  return hits;
}

// --- the scan ----------------------------------------------------------------

namespace detail {

struct AlphaResult {
  FieldStats stats;
  std::vector<HitRecord> records;
};

inline HitRecord secondary_pipeline(const EDSTuple& t, const SearchConfig& cfg, long n_primary,
                                    double h_primary, const mpz_class& En_primary) {
  auto t0 = std::chrono::steady_clock::now();
  HitRecord r;
  r.kind = "candidate";
  r.d = t.field.D;
  r.u2 = format_elem(t.u2);
  r.u3 = format_elem(t.u3);
  r.u4 = format_elem(t.u4);
  r.n_primary = n_primary;
  r.h_primary = h_primary;
  r.log10_En_primary = log10_mpz(En_primary);
  r.n_refined = 1L << (cfg.refine_iters + 1);
  try {
    GcdEstimate ref = gcd_estimate(t, cfg.refine_iters);
    r.h_refined = ref.value;
    r.log10_En_refined = log10_mpz(ref.En);
    RecoveredPair rp = recover(t, ref.value);
    r.route = route_name(rp.route);
    const FieldSpec& F = t.field;
    r.a1 = format_elem(rp.curve.a1);
    r.a2 = format_elem(rp.curve.a2);
    r.a3 = format_elem(rp.curve.a3);
    r.a4 = format_elem(rp.curve.a4);
    r.a6 = format_elem(rp.curve.a6);
    if (rp.ward_g) {
      r.g2 = format_elem(rp.ward_g->first);
      r.g3 = format_elem(rp.ward_g->second);
    }
    r.px = format_elem(rp.point.x);
    r.py = format_elem(rp.point.y);
    r.delta = format_elem(rp.curve.delta);
    if (is_nonsingular(rp.curve)) r.j = format_elem(j_invariant(rp.curve));
    r.v_nonsingular = rp.verified.nonsingular;
    r.v_on_curve = rp.verified.on_curve;
    r.v_tuple_match = rp.verified.tuple_match;
    r.v_torsion_screen = rp.verified.torsion_screen;
    if (cfg.with_full_estimate) {
      try {
        FullEstimate fe = full_estimate(t, rp.curve, cfg.refine_iters);
        r.h_full = fe.value;
      } catch (const IncompleteFactorizationError&) {
        // leave h_full unset; the gcd estimate stands on its own
      }
    }
  } catch (const TorsionSuspectedError& e) {
    r.error = std::string("torsion-suspected: ") + e.what();
  } catch (const RecoveryFailedError& e) {
    r.error = std::string("recovery-failed: ") + e.what();
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// One alpha's full (beta, gamma) scan.  Returns nothing if cancelled midway,
// so the alpha is never committed and a resume redoes it from scratch.
inline bool scan_alpha(const SearchConfig& cfg, const FieldSpec& F, const RingElem& alpha,
                       const std::vector<RingElem>& S, AlphaResult& out) {
  out.stats = FieldStats{};
  out.records.clear();
  U2Context ctx(alpha, F);
  RingElem u2cub = mul(alpha, square(alpha, F), F);
  EdsWorkspace ws;
  RingScratch scr;
  RingElem u4, u5, t0;
  Block V;
  mpz_class En, En1, g, q;
  const long n_final = 1L << (cfg.iters + 1);
  const double dn2 = 2.0 * static_cast<double>(n_final) * static_cast<double>(n_final);

  for (const RingElem& beta : S) {
    if (cfg.cancel && cfg.cancel()) return false;
    RingElem u3cub = mul(beta, square(beta, F), F);
    for (const RingElem& gamma : S) {
      ++out.stats.tested;
      detail::mul_into(u4, alpha, gamma, F, scr);
      detail::mul_into(t0, u4, u2cub, F, scr);
      detail::sub_into(u5, t0, u3cub);
      V.center = 2;
      V.terms[0] = RingElem{-1, 0};
      V.terms[1] = RingElem{0, 0};
      V.terms[2] = RingElem{1, 0};
      V.terms[3] = alpha;
      V.terms[4] = beta;
      V.terms[5] = u4;
      V.terms[6] = u5;
      try {
        bool pruned = false;
        for (int lev = 0; lev < cfg.iters; ++lev) {
          detail::double_block_inplace(V, ctx, F, ws);
          if (cfg.early_abort_at != 0 && V.center == cfg.early_abort_at &&
              lev + 1 < cfg.iters) {
            detail::norm_into(En, V.terms[3], F, scr);
            mpz_abs(En.get_mpz_t(), En.get_mpz_t());
            detail::norm_into(En1, V.terms[4], F, scr);
            mpz_abs(En1.get_mpz_t(), En1.get_mpz_t());
            if (sgn(En) != 0 && sgn(En1) != 0) {
              mpz_gcd(g.get_mpz_t(), En.get_mpz_t(), En1.get_mpz_t());
              mpz_divexact(q.get_mpz_t(), En.get_mpz_t(), g.get_mpz_t());
              double mid = q == 1 ? 0.0
                                  : log_mpz(q) / (2.0 * static_cast<double>(V.center) *
                                                  static_cast<double>(V.center));
              if (mid > 10.0 * cfg.height_bound) {
                pruned = true;
                break;
              }
            }
          }
        }
        if (pruned) {
          ++out.stats.pruned;
          continue;
        }
        detail::norm_into(En, V.terms[3], F, scr);
        mpz_abs(En.get_mpz_t(), En.get_mpz_t());
        detail::norm_into(En1, V.terms[4], F, scr);
        mpz_abs(En1.get_mpz_t(), En1.get_mpz_t());
        if (sgn(En) == 0 || sgn(En1) == 0) {
          ++out.stats.torsion;
          continue;
        }
        mpz_gcd(g.get_mpz_t(), En.get_mpz_t(), En1.get_mpz_t());
        mpz_divexact(q.get_mpz_t(), En.get_mpz_t(), g.get_mpz_t());
        if (q == 1) {
          ++out.stats.torsion;  // h~ = 0 fails the strict 0 < h~ bound
          continue;
        }
        double h = log_mpz(q) / dn2;
        if (h < cfg.height_bound) {
          ++out.stats.candidates;
          EDSTuple t{alpha, beta, u4, F};
          out.records.push_back(secondary_pipeline(t, cfg, n_final, h, En));
          if (!out.records.back().error.empty()) ++out.stats.errors;
        }
      } catch (const Error& e) {
        ++out.stats.errors;
        HitRecord r;
        r.kind = "candidate";
        r.d = F.D;
        r.u2 = format_elem(alpha);
        r.u3 = format_elem(beta);
        r.u4 = format_elem(u4);
        r.n_primary = n_final;
        r.error = e.what();
        out.records.push_back(std::move(r));
      }
    }
  }
  return true;
}

}  // namespace detail

inline SearchSummary run_search(const SearchConfig& cfg, const RecordSink& sink = {}) {
  validate_config(cfg);
  auto wall0 = std::chrono::steady_clock::now();
  std::clock_t cpu0 = std::clock();

  SearchSummary sum;
  const std::string hash = config_hash(cfg);

  detail::CheckpointState ck;
  if (!cfg.checkpoint_path.empty()) ck = detail::load_checkpoint(cfg.checkpoint_path, hash);
  for (const auto& [d, fs] : ck.per_field) {
    auto& agg = sum.per_field[d];
    agg.tested += fs.tested;
    agg.torsion += fs.torsion;
    agg.candidates += fs.candidates;
    agg.errors += fs.errors;
    agg.pruned += fs.pruned;
  }
  for (const auto& r : ck.records) {
    sum.raw.push_back(r);
    if (sink) sink(r);
  }

  std::ofstream ckout;
  if (!cfg.checkpoint_path.empty()) {
    bool have_content = false;
    {
      std::ifstream probe(cfg.checkpoint_path);
      have_content = probe.good() && probe.peek() != std::ifstream::traits_type::eof();
    }
    ckout.open(cfg.checkpoint_path, std::ios::app);
    if (!ckout) throw Error("cannot open checkpoint file: " + cfg.checkpoint_path);
    if (!have_content) {
      nlohmann::json hdr{{"format", "edsearch-checkpoint"}, {"version", 1}, {"cfg_hash", hash}};
      ckout << hdr.dump() << '\n';
      ckout.flush();
    }
  }

  struct Task {
    long long d;
    FieldSpec F;
    const std::vector<RingElem>* S;
    RingElem alpha;
    std::string alpha_str;
  };
  std::map<long long, std::vector<RingElem>> s_by_field;
  std::vector<Task> tasks;
  auto ranges = partition_work(cfg);
  auto [a_begin, a_end] = ranges[cfg.shard.index];
  for (long long d : cfg.fields) {
    FieldSpec F = FieldSpec::make(d);
    if (!s_by_field.count(d)) s_by_field[d] = enum_S(cfg.c);
    std::vector<RingElem> splus = enum_S_plus(cfg.c);
    for (std::size_t i = a_begin; i < a_end; ++i) {
      std::string as = format_elem(splus[i]);
      if (ck.done.count(detail::AlphaKey{d, as})) continue;
      tasks.push_back(Task{d, F, &s_by_field[d], splus[i], as});
    }
  }

  std::mutex commit_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> cancelled{false};
  std::size_t committed = 0;
  const std::size_t total_tasks = tasks.size();

  auto worker = [&]() {
    detail::AlphaResult res;
    for (;;) {
      if (cancelled.load(std::memory_order_relaxed)) return;
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      if (!detail::scan_alpha(cfg, task.F, task.alpha, *task.S, res)) {
        cancelled.store(true);
        return;
      }
      std::lock_guard<std::mutex> lk(commit_mu);
      if (ckout.is_open()) {
        nlohmann::json line{{"d", task.d},
                            {"alpha", task.alpha_str},
                            {"stats",
                             {{"tested", res.stats.tested},
                              {"torsion", res.stats.torsion},
                              {"candidates", res.stats.candidates},
                              {"errors", res.stats.errors},
                              {"pruned", res.stats.pruned}}},
                            {"records", nlohmann::json::array()}};
        for (const auto& r : res.records) line["records"].push_back(record_to_json(r));
        ckout << line.dump() << '\n';
        ckout.flush();
      }
      auto& agg = sum.per_field[task.d];
      agg.tested += res.stats.tested;
      agg.torsion += res.stats.torsion;
      agg.candidates += res.stats.candidates;
      agg.errors += res.stats.errors;
      agg.pruned += res.stats.pruned;
      for (auto& r : res.records) {
        if (sink) sink(r);
        sum.raw.push_back(std::move(r));
      }
      ++committed;
      if (cfg.progress) {
        char buf[160];
        snprintf(buf, sizeof(buf), "alpha %zu/%zu (D=%lld, alpha=%s): tested=%llu candidates=%llu",
                 committed, total_tasks, task.d, task.alpha_str.c_str(),
                 static_cast<unsigned long long>(res.stats.tested),
                 static_cast<unsigned long long>(res.stats.candidates));
        cfg.progress(buf);
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  unsigned nthreads = cfg.threads ? cfg.threads : (hw ? hw : 1);
  if (nthreads > tasks.size()) nthreads = tasks.size() ? static_cast<unsigned>(tasks.size()) : 1;
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& [d, fs] : sum.per_field) {
    sum.tested += fs.tested;
    sum.torsion_discarded += fs.torsion;
    sum.candidates += fs.candidates;
    sum.errors += fs.errors;
    sum.pruned += fs.pruned;
  }
  sum.completed = !cancelled.load() && committed == tasks.size();
  sum.hits = finalize_hits(sum.raw);
  sum.verified_hits = sum.hits.size();
  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  sum.cpu_seconds = static_cast<double>(std::clock() - cpu0) / CLOCKS_PER_SEC;
  return sum;
}

}  // namespace eds

#endif  // EDS_SEARCH_HPP
