#include "lcc/cli.hpp"

#include "lcc/io.hpp"
#include "lcc/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace lcc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t require_seed(const RunConfig &cfg, const std::string &what) {
  if (!cfg.seed)
    throw PreconditionError("--seed is required for " + what);
  return *cfg.seed;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

/// Appends one row, writing the header first when the file is new or empty.
void append_csv(const std::string &path, const std::string &header, const std::string &row) {
  if (path.empty())
    return;
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream f(path, std::ios::app | std::ios::binary);
  if (!f)
    throw PreconditionError("cannot write '" + path + "'");
  if (fresh)
    f << header << "\n";
  f << row << "\n";
}

void emit(const RunConfig &cfg, const Json &j, std::ostream &out) {
  if (cfg.out.empty())
    out << dump(j);
  else
    write_json_file(cfg.out, j);
}

Json code_json(const CodeParams &p) {
  return Json{{"k", p.k}, {"b", p.b}, {"blocks", p.blocks}, {"n", p.n}};
}

} // namespace

int cmd_gen(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  if (cfg.n == 0)
    throw PreconditionError("--n is required");
  const InstanceKind kind = parse_instance_kind(cfg.kind);
  std::uint64_t seed = 0;
  if (kind == InstanceKind::random || kind == InstanceKind::concat)
    seed = require_seed(cfg, "random instances");
  else if (cfg.seed)
    seed = *cfg.seed;
  const LabeledMatchingGraph g = gen_instance(kind, {cfg.n, cfg.delta.value_or(0.25)}, seed);
  emit(cfg, instance_to_json(g), out);
  std::ostream &summary = cfg.out.empty() ? err : out;
  summary << "gen kind=" << cfg.kind << " n=" << g.vertex_count() << " delta=" << fmt(g.delta())
          << " edges=" << g.edge_count() << "\n";
  return kExitOk;
}

int cmd_normal_form(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  const CodeParams params = CodeParams::make(cfg.k, cfg.b, 1.0 / 6, cfg.blocks);
  const StackedHadamardCode code(params);
  const NormalForm nf = extract_normal_form(hadamard_query_spec(code), code, cfg.tau);
  const ValidationReport v = validate_zero_error(nf, code, 4096, cfg.seed.value_or(1));
  const SmoothnessMargin margin = smoothness_margin(nf);
  const bool smooth = nf.smoothness_vacuous || margin.margin <= 1 + 1e-12;
  const bool ok = v.passed && smooth;
  Json j{{"schema", kSchema},
         {"command", "normal-form"},
         {"code", code_json(params)},
         {"tau", cfg.tau},
         {"validation", to_json(v)},
         {"smoothness_margin", Json{{"margin", margin.margin}, {"i", margin.i}, {"v", margin.v}}},
         {"passed", ok},
         {"normal_form", to_json(nf, true)}};
  emit(cfg, j, out);
  std::ostream &summary = cfg.out.empty() ? err : out;
  summary << "normal-form n=" << nf.n << " |T1|=" << nf.t1.size() << " |T2|=" << nf.t2.size()
          << " validation=" << (v.passed ? "pass" : "FAIL") << (v.sampled ? " (sampled)" : "")
          << " smoothness=" << fmt(margin.margin) << "\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_seed_search(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  const auto start = Clock::now();
  SeedTrace trace;
  std::string kind_name;
  std::uint64_t rng_seed = cfg.seed.value_or(0);
  if (!cfg.in.empty()) {
    const Instance inst = instance_from_json(read_json_file(cfg.in));
    kind_name = "file";
    trace = find_seed(inst.graph, inst.t1);
  } else {
    if (cfg.n == 0)
      throw PreconditionError("--n is required without --in");
    const InstanceKind kind = parse_instance_kind(cfg.kind);
    kind_name = cfg.kind;
    const std::vector<Vertex> none;
    switch (kind) {
    case InstanceKind::hadamard:
      trace = find_seed(HadamardGraph(cfg.n), none);
      break;
    case InstanceKind::perfect:
      trace = find_seed(PerfectGraph(cfg.n), none);
      break;
    default:
      rng_seed = require_seed(cfg, "random instances");
      trace = find_seed(gen_instance(kind, {cfg.n, cfg.delta.value_or(0.25)}, rng_seed), none);
    }
  }
  const double wall = elapsed_ms(start);
  Json j{{"schema", kSchema},       {"command", "seed-search"}, {"kind", kind_name}, {"rng_seed", rng_seed},
         {"trace", to_json(trace)}, {"wall_ms", wall}};
  emit(cfg, j, out);
  append_csv(cfg.csv, "schema,kind,n,delta,seed_size,phases_case1,phases_case2,wall_ms,rng_seed",
             "v1," + kind_name + "," + std::to_string(trace.n) + "," + fmt(trace.delta) + "," +
                 std::to_string(trace.seed.size()) + "," + std::to_string(trace.case1) + "," +
                 std::to_string(trace.case2) + "," + fmt(wall) + "," + std::to_string(rng_seed));
  std::ostream &summary = cfg.out.empty() ? err : out;
  summary << "seed-search kind=" << kind_name << " n=" << trace.n << " seed_size=" << trace.seed.size()
          << " case1=" << trace.case1 << " case2=" << trace.case2 << " covers=" << (trace.covers ? "yes" : "NO")
          << "\n";
  return trace.covers ? kExitOk : kExitFailed;
}

int cmd_decode(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  const std::uint64_t seed = require_seed(cfg, "decode");
  if (cfg.trials == 0)
    throw PreconditionError("--trials must be at least 1");
  const auto start = Clock::now();
  const CodeParams params = CodeParams::make(cfg.k, cfg.b, 1.0 / 6, cfg.blocks);
  const StackedHadamardCode code(params);
  const NormalForm nf = extract_normal_form(hadamard_query_spec(code), code, cfg.tau);
  const DecodePlan plan = make_decode_plan(nf);
  EstimatorConfig est;
  est.c_factor = cfg.c_factor;
  est.seed = seed;
  const std::size_t r = est.resolve_r(cfg.tau, params.n);
  const TrialSummary s = run_decode_trials(code, nf, plan, est, cfg.trials, seed);

  // trial 0 again, for a full per-coordinate report
  Rng rng = trial_rng(seed, 0);
  const Word c0 = code.encode(Message::random(params.k, rng));
  CountingOracle oracle(c0);
  const DecodeReport example = decode_full(nf, plan, oracle, est, rng, &c0);

  const double n = static_cast<double>(params.n);
  const double threshold = 1 - 2 / n;
  const bool ok = s.success_rate() >= threshold;
  const double shape = std::pow(cfg.tau, -4) * std::log2(n);
  const double wall = elapsed_ms(start);
  Json j{{"schema", kSchema},
         {"command", "decode"},
         {"code", code_json(params)},
         {"tau", cfg.tau},
         {"r", r},
         {"c_factor", cfg.c_factor},
         {"t1", plan.trace.t1},
         {"seed", plan.seed},
         {"seed_size", plan.seed.size()},
         {"phases_case1", plan.trace.case1},
         {"phases_case2", plan.trace.case2},
         {"trials", to_json(s)},
         {"threshold", threshold},
         {"passed", ok},
         {"query_constant", s.mean_queries_total / shape},
         {"example", to_json(example)},
         {"wall_ms", wall}};
  if (cfg.emit_bounds) {
    const BoundReport b = bound_report(params.n, params.k, cfg.tau, params.b, s.max_queries_total);
    j["bounds"] = to_json(b);
    j["bounds"]["fano_holds"] = static_cast<double>(params.k) <= b.fano_log2_C_max;
  }
  emit(cfg, j, out);
  append_csv(cfg.csv, "schema,n,k,b,tau,r,seed_size,queries_total,success,wall_ms",
             "v1," + std::to_string(params.n) + "," + std::to_string(params.k) + "," + std::to_string(params.b) +
                 "," + fmt(cfg.tau) + "," + std::to_string(r) + "," + std::to_string(plan.seed.size()) + "," +
                 std::to_string(s.max_queries_total) + "," + fmt(s.success_rate()) + "," + fmt(wall));
  std::ostream &summary = cfg.out.empty() ? err : out;
  summary << "decode n=" << params.n << " trials=" << s.trials << " success=" << fmt(s.success_rate())
          << " (need >= " << fmt(threshold) << ") queries=" << s.max_queries_total << " seed_size=" << plan.seed.size()
          << "\n";
  return ok ? kExitOk : kExitFailed;
}

int cmd_ldc_demo(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  const std::uint64_t seed = require_seed(cfg, "ldc-demo");
  if (cfg.k > 10)
    throw PreconditionError("ldc-demo needs a small outer code (k <= 10)");
  if (cfg.trials == 0)
    throw PreconditionError("--trials must be at least 1");
  const double delta = cfg.delta.value_or(1.0 / 6);
  const CodeParams params = CodeParams::make(cfg.k, cfg.b, 1.0 / 6, cfg.blocks);
  const StackedHadamardCode code(params);
  const TableCode table = TableCode::from(code);
  InnerCode inner;
  if (cfg.inner == "hadamard")
    inner = InnerCode::hadamard(cfg.b);
  else if (cfg.inner == "identity")
    inner = InnerCode::identity(cfg.b);
  else
    throw PreconditionError("--inner must be hadamard or identity");

  const DistanceReport outer_d = min_distance(table.codewords);
  const ConcatenatedCode c1 = concatenate(table, inner);
  const DistanceReport c1_d = min_distance(c1.words);
  const bool chain = c1_d.fraction + 1e-12 >= outer_d.fraction * inner.delta0;
  const ShatterResult vc = brute_force_vc(c1, cfg.max_vc);
  if (vc.I.empty()) {
    err << "ldc-demo: no shattered set found\n";
    return kExitFailed;
  }
  const bool cert_ok = verify_shattering(c1, vc.I, vc.certificate);
  const LdcConstruction ldc = build_ldc(code, table, inner, vc.I);
  bool roundtrip = true;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << ldc.I.size()); ++x) {
    const BitWord bits = concat_encode(ldc.encode(x), inner);
    for (std::size_t j = 0; j < ldc.I.size(); ++j)
      roundtrip = roundtrip && bits[ldc.I[j]] == ((x >> j) & 1u);
  }
  const LdcTrialSummary clean = run_ldc_trials(ldc, 0.0, cfg.trials, seed);
  const LdcTrialSummary noisy = run_ldc_trials(ldc, delta, cfg.trials, seed + 1);
  const bool ok = cert_ok && roundtrip && chain && clean.success_rate() == 1.0 &&
                  noisy.success_rate() >= 2.0 / 3 && clean.always_two_queries && noisy.always_two_queries;
  Json j{{"schema", kSchema},
         {"command", "ldc-demo"},
         {"outer", Json{{"code", code_json(params)}, {"distance", to_json(outer_d)}}},
         {"inner", to_json(inner)},
         {"concatenated", Json{{"length", c1.length()}, {"distance", to_json(c1_d)}, {"distance_chain_holds", chain}}},
         {"shatter", to_json(vc)},
         {"certificate_valid", cert_ok},
         {"roundtrip", roundtrip},
         {"ldc", to_json(ldc)},
         {"delta", delta},
         {"trials", Json{{"uncorrupted", to_json(clean)}, {"corrupted", to_json(noisy)}}},
         {"passed", ok}};
  emit(cfg, j, out);
  std::ostream &summary = cfg.out.empty() ? err : out;
  summary << "ldc-demo |I|=" << vc.I.size() << " concat_distance=" << fmt(c1_d.fraction)
          << " clean=" << fmt(clean.success_rate()) << " corrupted=" << fmt(noisy.success_rate()) << "\n";
  return ok ? kExitOk : kExitFailed;
}

int run_command(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  try {
    if (cfg.command == "gen")
      return cmd_gen(cfg, out, err);
    if (cfg.command == "normal-form")
      return cmd_normal_form(cfg, out, err);
    if (cfg.command == "seed-search")
      return cmd_seed_search(cfg, out, err);
    if (cfg.command == "decode")
      return cmd_decode(cfg, out, err);
    if (cfg.command == "ldc-demo")
      return cmd_ldc_demo(cfg, out, err);
    err << "error: unknown command '" << cfg.command << "'\n";
    return kExitUsage;
  } catch (const ZeroErrorViolation &e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitFailed;
  } catch (const InvariantError &e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "failed: " << e.what() << "\n";
    return kExitFailed;
  }
}

int lcc_lab_main(int argc, char **argv) {
  CLI::App app{"lcc_lab: two-query locally correctable code experiments"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<double> delta;

  auto seed_opt = [&](CLI::App *sub) { sub->add_option("--seed", cfg.seed, "master random seed"); };
  auto out_opt = [&](CLI::App *sub) { sub->add_option("--out", cfg.out, "JSON output path (default stdout)"); };
  auto code_opts = [&](CLI::App *sub) {
    sub->add_option("--k", cfg.k, "message bits")->capture_default_str();
    sub->add_option("--b", cfg.b, "symbol bits")->capture_default_str();
    sub->add_option("--blocks", cfg.blocks, "number of concatenated blocks")->capture_default_str();
  };
  auto instance_opts = [&](CLI::App *sub) {
    sub->add_option("--kind", cfg.kind, "hadamard | random | concat | perfect")->capture_default_str();
    sub->add_option("--n", cfg.n, "vertex count");
    sub->add_option("--delta", delta, "matching density for random and concat (default 0.25)");
  };

  auto *gen = app.add_subcommand("gen", "generate a labeled matching instance");
  instance_opts(gen);
  seed_opt(gen);
  out_opt(gen);

  auto *nf = app.add_subcommand("normal-form", "extract and validate the normal form of a stacked-Hadamard code");
  code_opts(nf);
  nf->add_option("--tau", cfg.tau, "corruption parameter")->capture_default_str();
  seed_opt(nf);
  out_opt(nf);

  auto *ss = app.add_subcommand("seed-search", "find a propagation seed");
  ss->add_option("--in", cfg.in, "instance JSON file");
  instance_opts(ss);
  seed_opt(ss);
  out_opt(ss);
  ss->add_option("--csv", cfg.csv, "append a CSV row");

  auto *dec = app.add_subcommand("decode", "run full-codeword decoding trials");
  code_opts(dec);
  dec->add_option("--tau", cfg.tau, "corruption parameter")->capture_default_str();
  dec->add_option("--trials", cfg.trials, "number of trials")->capture_default_str();
  dec->add_option("--c-factor", cfg.c_factor, "sample constant C in r = C tau^-2 ln n")->capture_default_str();
  dec->add_flag("--emit-bounds", cfg.emit_bounds, "add the bound comparison");
  seed_opt(dec);
  out_opt(dec);
  dec->add_option("--csv", cfg.csv, "append a CSV row");

  auto *ldc = app.add_subcommand("ldc-demo", "concatenate, find a shattered set and decode the derived LDC");
  code_opts(ldc);
  ldc->add_option("--delta", delta, "corruption fraction (default 1/6)");
  ldc->add_option("--trials", cfg.trials, "number of trials")->capture_default_str();
  ldc->add_option("--max-vc", cfg.max_vc, "largest index set examined")->capture_default_str();
  ldc->add_option("--inner", cfg.inner, "hadamard | identity")->capture_default_str();
  seed_opt(ldc);
  out_opt(ldc);

  // ldc-demo defaults to the 8-position Hadamard code
  ldc->preparse_callback([&](std::size_t) {
    cfg.k = 3;
    cfg.b = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.delta = delta;
  return run_command(cfg, std::cout, std::cerr);
}

} // namespace lcc
