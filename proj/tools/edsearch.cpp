// Copyright (c) 2026 the edsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// edsearch: search for nontorsion points of exceptionally small canonical
// height on elliptic curves over quadratic fields, via proper elliptic
// divisibility sequences.
//
//   edsearch search   --d 3 --c 2 [--height-bound 0.01] [--iters 6] ...
//   edsearch estimate --d -7 --tuple "w;4-2*w;16-8*w" [--iters 6]
//   edsearch recover  --d 3  --tuple "1+w;2+2*w;4+4*w"
//   edsearch verify   --d 3  --tuple "1+w;2+2*w;4+4*w"
//
// Exit codes: 0 success, 1 failed verification / torsion, 2 bad
// configuration, 3 corrupt checkpoint.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "eds/search.hpp"

namespace {

using nlohmann::json;

std::array<eds::RingElem, 3> parse_tuple_arg(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ';') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3)
    throw eds::ParseError("tuple must be \"u2;u3;u4\", got: " + s);
  return {eds::parse_elem(parts[0]), eds::parse_elem(parts[1]), eds::parse_elem(parts[2])};
}

std::string nine_digits(double v) {
  char buf[40];
  snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

json estimate_json(const eds::GcdEstimate& e) {
  return json{{"n", e.n},
              {"h_tilde", e.value},
              {"h_tilde_str", nine_digits(e.value)},
              {"log10_En", eds::log10_mpz(e.En)},
              {"bits_En", mpz_sizeinbase(e.En.get_mpz_t(), 2)},
              {"bits_En1", mpz_sizeinbase(e.En1.get_mpz_t(), 2)},
              {"bits_gcd", mpz_sizeinbase(e.g.get_mpz_t(), 2)},
              {"degree", e.d}};
}

json recovery_json(const eds::RecoveredPair& rp) {
  json j{{"route", eds::route_name(rp.route)},
         {"a1", eds::format_elem(rp.curve.a1)},
         {"a2", eds::format_elem(rp.curve.a2)},
         {"a3", eds::format_elem(rp.curve.a3)},
         {"a4", eds::format_elem(rp.curve.a4)},
         {"a6", eds::format_elem(rp.curve.a6)},
         {"point", {{"x", eds::format_elem(rp.point.x)}, {"y", eds::format_elem(rp.point.y)}}},
         {"delta", eds::format_elem(rp.curve.delta)},
         {"integral_model", rp.integral_model},
         {"verified",
          {{"nonsingular", rp.verified.nonsingular},
           {"on_curve", rp.verified.on_curve},
           {"tuple_match", rp.verified.tuple_match},
           {"torsion_screen", rp.verified.torsion_screen}}}};
  if (eds::is_nonsingular(rp.curve)) j["j"] = eds::format_elem(eds::j_invariant(rp.curve));
  if (rp.ward_g) {
    j["g2"] = eds::format_elem(rp.ward_g->first);
    j["g3"] = eds::format_elem(rp.ward_g->second);
  }
  return j;
}

struct SearchArgs {
  std::vector<long long> ds;
  long c = 0;
  double height_bound = 0.01;
  int iters = 6;
  int refine_iters = 7;
  std::string shards = "0/1";
  std::string checkpoint;
  std::string out;
  std::string format = "json";
  std::string early_abort = "off";
  std::string threads = "auto";
};

eds::SearchConfig to_config(const SearchArgs& a) {
  eds::SearchConfig cfg;
  cfg.fields = a.ds;
  cfg.c = a.c;
  cfg.height_bound = a.height_bound;
  cfg.iters = a.iters;
  cfg.refine_iters = a.refine_iters;
  unsigned idx = 0, cnt = 0;
  if (sscanf(a.shards.c_str(), "%u/%u", &idx, &cnt) != 2)
    throw eds::ConfigError("--shards must be index/count, e.g. 0/4");
  cfg.shard = {idx, cnt};
  cfg.checkpoint_path = a.checkpoint;
  if (a.early_abort != "off") {
    try {
      cfg.early_abort_at = std::stol(a.early_abort);
    } catch (const std::exception&) {
      throw eds::ConfigError("--early-abort-at expects an index or 'off'");
    }
  }
  if (a.threads == "auto") {
    cfg.threads = 0;
  } else {
    try {
      cfg.threads = static_cast<unsigned>(std::stoul(a.threads));
    } catch (const std::exception&) {
      throw eds::ConfigError("--threads expects a count or 'auto'");
    }
    if (cfg.threads == 0) throw eds::ConfigError("--threads must be positive");
  }
  return cfg;
}

int cmd_search(const SearchArgs& args) {
  eds::SearchConfig cfg = to_config(args);
  eds::validate_config(cfg);
  const bool csv = args.format == "csv";

  std::ofstream file;
  std::ostream* outp = &std::cout;
  if (!args.out.empty()) {
    file.open(args.out, std::ios::trunc);
    if (!file) throw eds::Error("cannot open output file: " + args.out);
    outp = &file;
  }
  if (csv) *outp << eds::record_csv_header() << '\n';

  cfg.progress = [](const std::string& line) { std::cerr << line << '\n'; };
  eds::RecordSink sink = [&](const eds::HitRecord& r) {
    if (csv) *outp << eds::record_to_csv(r) << '\n';
    else *outp << eds::record_to_json(r).dump() << '\n';
    outp->flush();
  };

  eds::SearchSummary sum = eds::run_search(cfg, sink);
  for (const auto& h : sum.hits) {
    if (csv) *outp << eds::record_to_csv(h) << '\n';
    else *outp << eds::record_to_json(h).dump() << '\n';
  }
  outp->flush();

  std::cerr << "fields:";
  for (long long d : cfg.fields) std::cerr << ' ' << d;
  std::cerr << "\ntuples tested:     " << sum.tested
            << "\ntorsion discarded: " << sum.torsion_discarded
            << "\npruned early:      " << sum.pruned
            << "\ncandidates:        " << sum.candidates
            << "\nerrors:            " << sum.errors
            << "\nverified hits:     " << sum.verified_hits
            << "\nwall seconds:      " << sum.wall_seconds
            << "\ncpu seconds:       " << sum.cpu_seconds << '\n';
  for (const auto& h : sum.hits)
    std::cerr << "hit: D=" << h.d << " (" << h.u2 << "; " << h.u3 << "; " << h.u4
              << ") h~_" << h.n_refined << " = " << nine_digits(h.h_refined.value_or(0.0))
              << " [" << h.route << "]\n";
  return 0;
}

int cmd_estimate(long long d, const std::string& tuple, int iters) {
  eds::FieldSpec F = eds::FieldSpec::make(d);
  auto [u2, u3, u4] = parse_tuple_arg(tuple);
  eds::EDSTuple t = eds::make_tuple(u2, u3, u4, F);
  json out{{"d", d},
           {"u2", eds::format_elem(t.u2)},
           {"u3", eds::format_elem(t.u3)},
           {"u4", eds::format_elem(t.u4)}};
  try {
    eds::GcdEstimate e = eds::gcd_estimate(t, iters);
    out["estimate"] = estimate_json(e);
    std::cout << out.dump(2) << '\n';
    if (e.value == 0.0) {
      std::cerr << "torsion-suspected: gcd absorbed E_n entirely (h~ = 0)\n";
      return 1;
    }
    return 0;
  } catch (const eds::TorsionSuspectedError& e) {
    out["torsion_suspected"] = true;
    out["detail"] = e.what();
    std::cout << out.dump(2) << '\n';
    std::cerr << "torsion-suspected: " << e.what() << '\n';
    return 1;
  }
}

int cmd_recover(long long d, const std::string& tuple) {
  eds::FieldSpec F = eds::FieldSpec::make(d);
  auto [u2, u3, u4] = parse_tuple_arg(tuple);
  eds::EDSTuple t = eds::make_tuple(u2, u3, u4, F);
  eds::RecoveredPair rp = eds::recover(t);
  json out{{"d", d},
           {"u2", eds::format_elem(t.u2)},
           {"u3", eds::format_elem(t.u3)},
           {"u4", eds::format_elem(t.u4)},
           {"recovery", recovery_json(rp)}};
  std::cout << out.dump(2) << '\n';
  return rp.verified.all() ? 0 : 1;
}

int cmd_verify(long long d, const std::string& tuple, int iters, int refine_iters) {
  eds::FieldSpec F = eds::FieldSpec::make(d);
  auto [u2, u3, u4] = parse_tuple_arg(tuple);
  eds::EDSTuple t = eds::make_tuple(u2, u3, u4, F);
  json out{{"d", d},
           {"u2", eds::format_elem(t.u2)},
           {"u3", eds::format_elem(t.u3)},
           {"u4", eds::format_elem(t.u4)}};
  bool pass = true;
  std::optional<double> refined;
  try {
    eds::GcdEstimate e1 = eds::gcd_estimate(t, iters);
    out["estimate_primary"] = estimate_json(e1);
    eds::GcdEstimate e2 = eds::gcd_estimate(t, refine_iters);
    out["estimate_refined"] = estimate_json(e2);
    refined = e2.value;
    if (!(e1.value > 0.0) || !(e2.value > 0.0)) pass = false;
  } catch (const eds::TorsionSuspectedError& e) {
    out["torsion_suspected"] = true;
    out["detail"] = e.what();
    pass = false;
  }
  try {
    eds::RecoveredPair rp = eds::recover(t, refined);
    out["recovery"] = recovery_json(rp);
    if (!rp.verified.all()) pass = false;
    try {
      eds::FullEstimate fe = eds::full_estimate(t, rp.curve, refine_iters);
      json fj{{"n", fe.n}, {"h_full", fe.value}, {"h_full_str", nine_digits(fe.value)}};
      fj["T"] = json::array();
      for (const auto& p : fe.primes) fj["T"].push_back(p.get_str());
      if (refined) {
        // same reading at three significant figures?
        double a = fe.value, b = *refined;
        double ulp = std::pow(10.0, std::floor(std::log10(std::max(std::abs(a), std::abs(b)))) - 2);
        fj["agrees_with_gcd_3sf"] = std::abs(a - b) <= ulp;
      }
      out["estimate_full"] = fj;
    } catch (const eds::IncompleteFactorizationError& e) {
      out["estimate_full"] = json{{"error", e.what()}};
    }
  } catch (const eds::Error& e) {
    out["recovery"] = json{{"error", e.what()}};
    pass = false;
  }
  out["pass"] = pass;
  std::cout << out.dump(2) << '\n';
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elliptic divisibility sequence search for low-height points"};
  app.require_subcommand(1);

  SearchArgs sa;
  CLI::App* sc = app.add_subcommand("search", "scan tuple space for small heights");
  sc->add_option("--d", sa.ds, "field discriminant D (repeatable)")->required();
  sc->add_option("--c", sa.c, "coordinate box bound")->required();
  sc->add_option("--height-bound", sa.height_bound, "height threshold H");
  sc->add_option("--iters", sa.iters, "doubling count I (n = 2^(I+1))");
  sc->add_option("--refine-iters", sa.refine_iters, "doubling count for refinement");
  sc->add_option("--shards", sa.shards, "shard index/count, e.g. 2/8");
  sc->add_option("--checkpoint", sa.checkpoint, "checkpoint file for resume");
  sc->add_option("--out", sa.out, "output file (default stdout)");
  sc->add_option("--format", sa.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sc->add_option("--early-abort-at", sa.early_abort, "prune at index n when h~_n > 10H, or 'off'");
  sc->add_option("--threads", sa.threads, "worker count or 'auto'");

  long long ed = 0;
  std::string etuple;
  int eiters = 6;
  CLI::App* ec = app.add_subcommand("estimate", "gcd height estimate for one tuple");
  ec->add_option("--d", ed, "field discriminant D")->required();
  ec->add_option("--tuple", etuple, "tuple \"u2;u3;u4\"")->required();
  ec->add_option("--iters", eiters, "doubling count I");

  long long rd = 0;
  std::string rtuple;
  CLI::App* rc = app.add_subcommand("recover", "reconstruct curve/point from a tuple");
  rc->add_option("--d", rd, "field discriminant D")->required();
  rc->add_option("--tuple", rtuple, "tuple \"u2;u3;u4\"")->required();

  long long vd = 0;
  std::string vtuple;
  int viters = 6, vrefine = 7;
  CLI::App* vc = app.add_subcommand("verify", "full pipeline report for one tuple");
  vc->add_option("--d", vd, "field discriminant D")->required();
  vc->add_option("--tuple", vtuple, "tuple \"u2;u3;u4\"")->required();
  vc->add_option("--iters", viters, "doubling count I");
  vc->add_option("--refine-iters", vrefine, "doubling count for refinement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (sc->parsed()) return cmd_search(sa);
    if (ec->parsed()) return cmd_estimate(ed, etuple, eiters);
    if (rc->parsed()) return cmd_recover(rd, rtuple);
    if (vc->parsed()) return cmd_verify(vd, vtuple, viters, vrefine);
  } catch (const eds::CorruptCheckpointError& e) {
    std::cerr << "corrupt checkpoint: " << e.what() << '\n';
    return 3;
  } catch (const eds::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const eds::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const eds::InvalidTupleError& e) {
    std::cerr << "invalid tuple: " << e.what() << '\n';
    return 2;
  } catch (const eds::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
