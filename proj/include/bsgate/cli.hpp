#pragma once

// bsgate command line. run_cli is the whole program; tools/bsgate.cpp only
// forwards argv. Exit codes: 0 ok, 1 usage or parse error, 2 validation
// failure, 3 internal invariant violation.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bsgate/assembly.hpp"
#include "bsgate/charts.hpp"
#include "bsgate/complex_io.hpp"
#include "bsgate/grid_io.hpp"
#include "bsgate/holonomy.hpp"
#include "bsgate/random_complex.hpp"
#include "bsgate/report.hpp"
#include "bsgate/splitting.hpp"
#include "bsgate/weights.hpp"

namespace bsgate {

inline int exit_code_for(const std::string& code) {
  static const std::set<std::string> usage{"usage", "syntax", "duplicate", "dangling", "arity", "io"};
  static const std::set<std::string> internal{"InvariantViolation", "TracingInconsistency", "Overflow"};
  if (usage.count(code)) return 1;
  if (internal.count(code)) return 3;
  return 2;
}

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string rational_text(const Rational& r) {
  std::ostringstream ss;
  ss << r;
  return ss.str();
}

inline std::string join_witness(const ConstraintSystem& s, const Certificate& c) {
  std::string out;
  for (std::size_t j = 0; j < s.variables.size(); ++j)
    out += (j ? " " : "") + s.variables[j] + "=" + c.witness[j].str();
  return out;
}

inline std::string join_rows(const std::vector<LinearForm>& rows, const std::vector<Rational>& m) {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (m[i] != 0) out += (out.empty() ? "" : " ") + rows[i].provenance + "=" + rational_text(m[i]);
  return out.empty() ? "-" : out;
}

/// Adds a certificate to the report, re-verifying it first.
inline void certificate_lines(RunReport& rep, const std::string& prefix, const ConstraintSystem& s,
                              const Certificate& c) {
  if (!verify_certificate(s, c))
    throw Error("InvariantViolation", prefix + " certificate failed verification");
  rep.add(prefix + ".verdict", c.verdict == Verdict::Feasible ? "feasible" : "infeasible");
  if (c.verdict == Verdict::Feasible) {
    rep.add(prefix + ".witness", join_witness(s, c));
    const auto slack = inequality_slacks(s, to_int64(c.witness));
    std::string tight;
    for (std::size_t i = 0; i < slack.size(); ++i)
      if (slack[i] == 0) tight += (tight.empty() ? "" : " ") + s.inequalities[i].provenance;
    rep.add(prefix + ".tight", tight.empty() ? "-" : tight);
    std::string lines = prefix + ".weights:\n";
    for (std::size_t j = 0; j < s.variables.size(); ++j)
      lines += "w " + s.variables[j] + " " + c.witness[j].str() + "\n";
    rep.blocks.push_back(lines);
  } else {
    rep.add(prefix + ".lambda", join_rows(s.equalities, c.lambda));
    rep.add(prefix + ".mu", join_rows(s.inequalities, c.mu));
  }
  rep.add(prefix + ".verified", "true");
}

inline void oracle_lines(RunReport& rep, const std::string& prefix, const ConstraintSystem& s, const Certificate& c,
                         long long bound) {
  auto bf = brute_force(s, bound);
  bool agree = !(bf && c.verdict == Verdict::Infeasible);
  if (bf) {
    Certificate b;
    b.verdict = Verdict::Feasible;
    b.witness.assign(bf->begin(), bf->end());
    if (!verify_certificate(s, b)) agree = false;
  }
  rep.add(prefix + ".oracle", std::string(bf ? "witness" : "none") + " within bound " + std::to_string(bound) +
                                  (agree ? ", agrees" : ", DISAGREES"));
  if (!agree) throw Error("InvariantViolation", prefix + ": brute-force oracle disagrees with the solver");
}

inline SystemKind parse_kind(const std::string& k) {
  if (k == "neg-tisc") return SystemKind::NegTisc;
  if (k == "pos-tisc") return SystemKind::PosTisc;
  if (k == "isc") return SystemKind::Isc;
  throw Error("usage", "unknown kind " + k);
}

inline std::string weights_text(const WeightVector& w) {
  std::string s;
  for (const auto& [k, v] : w) s += (s.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return s;
}

inline void assembly_lines(RunReport& rep, const AssembledSurface& s) {
  rep.add("components", std::to_string(s.components.size()));
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    const auto& comp = s.components[i];
    const std::string p = "component." + std::to_string(i);
    std::string copies;
    for (auto k : comp.copies)
      copies += (copies.empty() ? "" : " ") + s.copies[k].first + "#" + std::to_string(s.copies[k].second);
    rep.add(p + ".copies", copies);
    rep.add(p + ".euler", std::to_string(euler_characteristic(s, i)));
    rep.add(p + ".classification", to_string(comp.classification));
    for (std::size_t b = 0; b < comp.boundary.size(); ++b) {
      const auto& bd = comp.boundary[b];
      std::string runs, corners;
      for (const auto& r : bd.runs) runs += (runs.empty() ? "" : " ") + r.edge + "@" + r.sector + "#" + std::to_string(r.level);
      for (const auto& c : bd.corners)
        corners += (corners.empty() ? "" : " ") + c.dp + to_string(c.sign) + "/" + std::to_string(c.turn_count);
      rep.add(p + ".boundary." + std::to_string(b), "runs=[" + runs + "] corners=[" + corners + "]" +
                                                         (bd.has_free ? " free" : "") +
                                                         (bd.reflex ? " reflex=" + std::to_string(bd.reflex) : ""));
    }
  }
}

inline void verdict_lines(RunReport& rep, const std::string& prefix, const CriterionVerdict& v) {
  rep.add(prefix + ".passes", v.passes ? "true" : "false");
  certificate_lines(rep, prefix + ".neg-tisc", v.neg_tisc_system, v.neg_tisc);
  certificate_lines(rep, prefix + ".isc", v.isc_system, v.isc);
}

inline std::vector<std::size_t> parse_shape(const std::string& s, std::size_t want) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(t, &used);
    } catch (...) {
      used = 0;
    }
    if (used != t.size() || t.empty() || v == 0) throw Error("usage", "bad --grid entry '" + t + "'");
    out.push_back(v);
  }
  if (out.size() != want) throw Error("usage", "--grid needs " + std::to_string(want) + " comma-separated sizes");
  return out;
}

struct FieldParams {
  double y0 = 0.5, r0 = 0.5, c = 0.1;
};

/// Built-in analytic sample fields.
inline SlopeGrid sample_field(const std::string& name, const std::string& shape, const FieldParams& p) {
  auto box = [&](auto fn) {
    auto n = parse_shape(shape, 3);
    auto g = make_box(n[0], n[1], n[2]);
    fill(g, g.f, fn);
    return g;
  };
  auto cyl = [&](auto f, auto h) {
    auto n = parse_shape(shape, 3);
    auto g = make_cylinder(1.0, n[0], n[1], n[2]);
    fill(g, g.f, f);
    fill(g, g.h, h);
    return g;
  };
  auto ann = [&](auto fn) {
    auto n = parse_shape(shape, 2);
    auto g = make_annulus(n[0], n[1]);
    fill(g, g.f, [&](double t, double z, double) { return fn(t, z); });
    return g;
  };
  const double y0 = p.y0, r0 = p.r0, c = p.c;
  if (name == "box-flat") return box([](double, double, double) { return -1.0; });
  if (name == "box-linear") return box([](double, double y, double) { return -1 - y; });
  if (name == "box-rising") return box([](double, double y, double) { return y; });
  if (name == "box-cube") return box([](double, double y, double) { return -y * y * y; });
  if (name == "box-cubic")
    return box([=](double, double y, double) { return -1 - std::pow(std::max(0.0, y - y0), 3); });
  if (name == "cyl-pure") return cyl([](double r, double, double) { return -r * r; }, [](double, double, double) { return -1.0; });
  if (name == "cyl-quartic")
    return cyl([](double r, double, double) { return -r * r * r * r; }, [](double r, double, double) { return -r * r; });
  if (name == "cyl-rising") return cyl([](double r, double, double) { return r * r; }, [](double, double, double) { return 1.0; });
  if (name == "cyl-flattened")
    return cyl(
        [=](double r, double, double) {
          double s = std::min(r / r0, 1.0);
          return -r0 * r0 * (s * s - s * s * s * s / 2);
        },
        [=](double r, double, double) {
          double s = r / r0;
          return s < 1 ? -(1 - s * s / 2) : -r0 * r0 / (2 * r * r);
        });
  if (name == "cyl-hollow")
    return cyl([=](double r, double, double) { return r < r0 ? 0.0 : -std::pow(r - r0, 3); },
               [=](double r, double, double) { return r < r0 ? 0.0 : -std::pow(r - r0, 3) / (r * r); });
  if (name == "annulus-quadratic") return ann([=](double, double z) { return -c * (1 - z * z); });
  if (name == "annulus-wavy") return ann([](double t, double z) { return -(1 - z * z) * (2 + std::sin(t)); });
  if (name == "annulus-flat") return ann([](double, double) { return 0.0; });
  throw Error("usage", "unknown field " + name);
}

inline void chart_lines(RunReport& rep, const SlopeGrid& g, const ChartReport& r) {
  std::size_t contact = 0;
  for (auto b : r.contact_mask) contact += b;
  rep.add("chart.kind", to_string(g.kind));
  rep.add("chart.is_confoliation", r.is_confoliation ? "true" : "false");
  rep.add("chart.contact_cells", std::to_string(contact) + "/" + std::to_string(r.contact_mask.size()));
  rep.add("chart.max_violation", format_double(r.max_violation));
  if (g.kind == ChartKind::Cylinder) rep.add("chart.identity_residual", format_double(r.identity_residual));
  rep.add("chart.tol", format_double(r.tol));
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Branched surface criterion checker and chart verifier", "bsgate"};
  app.set_version_flag("--version", "bsgate " BSGATE_VERSION);
  app.require_subcommand(1);

  std::string file, file2, kind = "criterion", weights_file, sector, entry, exit_pos, choice = "safe";
  long long oracle_bound = -1;
  auto* validate_cmd = app.add_subcommand("validate", "check the structural invariants of a complex");
  validate_cmd->add_option("file", file, "complex file")->required();

  auto* detect = app.add_subcommand("detect", "decide the weight systems of a complex");
  detect->add_option("--kind", kind, "neg-tisc | pos-tisc | isc | criterion")
      ->check(CLI::IsMember({"neg-tisc", "pos-tisc", "isc", "criterion"}));
  detect->add_option("--oracle-bound", oracle_bound, "cross-check with brute force up to this entry bound");
  detect->add_option("file", file, "complex file")->required();

  std::string assemble_kind = "neg-tisc";
  auto* assemble_cmd = app.add_subcommand("assemble", "build the surface carried by a weight vector");
  assemble_cmd->add_option("--kind", assemble_kind, "system whose witness to use when --weights is absent")
      ->check(CLI::IsMember({"neg-tisc", "pos-tisc", "isc"}));
  assemble_cmd->add_option("--weights", weights_file, "weights file (lines: w <sector> <n>)");
  assemble_cmd->add_option("file", file, "complex file")->required();
  assemble_cmd->add_option("weights-file", file2, "weights file, same as --weights");

  auto* split_cmd = app.add_subcommand("split", "split along an arc in a sector");
  split_cmd->add_option("--sector", sector, "sector id")->required();
  split_cmd->add_option("--entry", entry, "entry position W:K:P")->required();
  split_cmd->add_option("--exit", exit_pos, "exit position W:K:P")->required();
  split_cmd->add_option("--choice", choice, "over | under | neutral | safe")
      ->check(CLI::IsMember({"over", "under", "neutral", "safe"}));
  split_cmd->add_option("file", file, "complex file")->required();

  auto* schedule_cmd = app.add_subcommand("schedule", "run a plan of safe splits");
  schedule_cmd->add_option("file", file, "complex file")->required();
  schedule_cmd->add_option("plan", file2, "plan file")->required();

  std::string op, field, shape, out_path;
  double tol = 1e-9, step = 1e-3, r0 = 0.5, y0 = 0.5, y1 = 0.75, delta = 0.1, z0 = 0.0, R = 1.0, cval = 0.1;
  std::string mode = "inner";
  std::vector<double> z0s;
  auto* chart = app.add_subcommand("chart", "slope-function checks and constructions");
  chart->add_option("op", op, "check-box | check-cyl | purify-box | purify-cyl | extend | holonomy")
      ->required()
      ->check(CLI::IsMember({"check-box", "check-cyl", "purify-box", "purify-cyl", "extend", "holonomy"}));
  chart->add_option("input", file, "input grid file");
  chart->add_option("--field", field, "built-in sample field instead of an input file");
  chart->add_option("--grid", shape, "shape of the sampled grid, e.g. 65,65,65");
  chart->add_option("--tol", tol, "sign tolerance")->check(CLI::PositiveNumber);
  chart->add_option("--step", step, "integration step");
  chart->add_option("--r0", r0, "radius r0");
  chart->add_option("--R", R, "outer radius for extend");
  chart->add_option("--y0", y0, "y0");
  chart->add_option("--y1", y1, "y1");
  chart->add_option("--delta", delta, "delta");
  chart->add_option("--c", cval, "coefficient of the annulus-quadratic field");
  chart->add_option("--mode", mode, "inner | outer")->check(CLI::IsMember({"inner", "outer"}));
  chart->add_option("--z0", z0s, "starting heights for holonomy");
  chart->add_option("--out", out_path, "write the output grid here");

  auto* selftest = app.add_subcommand("selftest", "quick randomized self-check (seed from BSGATE_SEED)");

  std::vector<const char*> argv{"bsgate"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  RunReport rep;
  try {
    if (validate_cmd->parsed()) {
      rep.subcommand = "validate";
      auto text = read_file(file);
      rep.input(file, text);
      auto c = parse_complex(text);
      auto v = validate(c);
      rep.add("violations", std::to_string(v.size()));
      for (const auto& s : v) rep.add("violation", s);
      out << rep.render();
      return v.empty() ? 0 : 2;
    }
    if (detect->parsed()) {
      rep.subcommand = "detect";
      auto text = read_file(file);
      rep.input(file, text);
      rep.param("kind", kind);
      if (oracle_bound >= 0) rep.param("oracle-bound", std::to_string(oracle_bound));
      auto c = parse_complex(text);
      if (kind == "criterion") {
        auto v = criterion(c);
        verdict_lines(rep, "criterion", v);
        if (oracle_bound >= 0) {
          oracle_lines(rep, "criterion.neg-tisc", v.neg_tisc_system, v.neg_tisc, oracle_bound);
          oracle_lines(rep, "criterion.isc", v.isc_system, v.isc, oracle_bound);
        }
      } else {
        auto s = build_system(c, parse_kind(kind));
        auto cert = feasible(s);
        certificate_lines(rep, kind, s, cert);
        if (oracle_bound >= 0) oracle_lines(rep, kind, s, cert, oracle_bound);
      }
      out << rep.render();
      return 0;
    }
    if (assemble_cmd->parsed()) {
      rep.subcommand = "assemble";
      auto text = read_file(file);
      rep.input(file, text);
      rep.param("kind", assemble_kind);
      auto c = parse_complex(text);
      const auto k = parse_kind(assemble_kind);
      WeightVector w;
      if (!file2.empty()) {
        if (!weights_file.empty()) throw Error("usage", "weights given twice");
        weights_file = file2;
      }
      if (!weights_file.empty()) {
        auto wt = read_file(weights_file);
        rep.input(weights_file, wt);
        w = parse_weights(wt, c);
      } else {
        auto s = build_system(c, k);
        auto cert = feasible(s);
        certificate_lines(rep, assemble_kind, s, cert);
        if (cert.verdict == Verdict::Infeasible) {
          out << rep.render();
          return 0;
        }
        auto v = to_int64(cert.witness);
        for (std::size_t j = 0; j < s.variables.size(); ++j) w[s.variables[j]] = v[j];
      }
      rep.add("weights", weights_text(w));
      auto surf = assemble(c, w, k);
      if (roundtrip_weights(surf) != w) throw Error("InvariantViolation", "assembled copies do not reproduce the weights");
      rep.add("roundtrip", "ok");
      assembly_lines(rep, surf);
      out << rep.render();
      return 0;
    }
    if (split_cmd->parsed()) {
      rep.subcommand = "split";
      auto text = read_file(file);
      rep.input(file, text);
      rep.param("sector", sector);
      rep.param("entry", entry);
      rep.param("exit", exit_pos);
      rep.param("choice", choice);
      auto c = parse_complex(text);
      SplitLocus l{sector, parse_position(entry), parse_position(exit_pos)};
      rep.add("bad_move", is_bad_move(c, l) ? "true" : "false");
      BranchedSurfaceComplex result;
      if (choice == "safe") {
        auto r = safe_split(c, l);
        rep.add("choice", to_string(r.choice));
        verdict_lines(rep, "over", r.over_verdict);
        if (r.under_verdict) verdict_lines(rep, "under", *r.under_verdict);
        rep.add("dp_L", r.split.dp_L);
        rep.add("dp_R", r.split.dp_R);
        result = std::move(r.split.complex);
      } else {
        auto m = choice == "over" ? MoveChoice::Over : (choice == "under" ? MoveChoice::Under : MoveChoice::Neutral);
        auto r = split(c, l, m);
        rep.add("choice", to_string(m));
        if (!r.dp_L.empty()) {
          rep.add("dp_L", r.dp_L + " " + to_string(r.complex.doublepoint(r.dp_L)->sign));
          rep.add("dp_R", r.dp_R + " " + to_string(r.complex.doublepoint(r.dp_R)->sign));
        }
        verdict_lines(rep, "result", criterion(r.complex));
        result = std::move(r.complex);
      }
      rep.blocks.push_back("complex:\n" + print_complex(result));
      out << rep.render();
      return 0;
    }
    if (schedule_cmd->parsed()) {
      rep.subcommand = "schedule";
      auto text = read_file(file), plan_text = read_file(file2);
      rep.input(file, text);
      rep.input(file2, plan_text);
      auto c = parse_complex(text);
      auto plan = parse_plan(plan_text);
      ScheduleResult r;
      try {
        r = run_schedule(c, plan);
      } catch (const ScheduleError& e) {
        rep.add("failed_step", std::to_string(e.step()));
        rep.add("error", e.code() + std::string(": ") + e.what());
        out << rep.render();
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return exit_code_for(e.code());
      }
      rep.add("steps", std::to_string(r.trace.size()));
      for (const auto& st : r.trace) {
        const auto& s = plan[st.index];
        rep.add("step." + std::to_string(st.index),
                s.sector + " " + std::to_string(s.entry.word) + ":" + std::to_string(s.entry.item) + " " +
                    std::to_string(s.exit.word) + ":" + std::to_string(s.exit.item) + " choice=" + to_string(st.choice) +
                    " L=" + st.dp_L + " R=" + st.dp_R + " passes=" + (st.verdict.passes ? "true" : "false"));
      }
      rep.blocks.push_back("complex:\n" + print_complex(r.complex));
      out << rep.render();
      return 0;
    }
    if (chart->parsed()) {
      rep.subcommand = "chart " + op;
      SlopeGrid g;
      FieldParams fp{y0, r0, cval};
      if (!field.empty()) {
        if (!file.empty()) throw Error("usage", "give either an input grid or --field, not both");
        g = sample_field(field, shape, fp);
        rep.param("field", field);
        rep.param("grid", shape);
      } else {
        if (file.empty()) throw Error("usage", "chart needs an input grid or --field");
        auto text = read_file(file);
        rep.input(file, text);
        g = parse_grid(text);
      }
      rep.param("tol", format_double(tol));
      std::optional<SlopeGrid> produced;
      if (op == "check-box") {
        chart_lines(rep, g, check_box(g, tol));
      } else if (op == "check-cyl") {
        chart_lines(rep, g, check_cylinder(g, tol));
      } else if (op == "purify-box") {
        rep.param("y0", format_double(y0));
        rep.param("y1", format_double(y1));
        rep.param("delta", format_double(delta));
        produced = purify_box(g, y0, y1, delta, tol);
        chart_lines(rep, *produced, check_box(*produced, tol));
      } else if (op == "purify-cyl") {
        rep.param("r0", format_double(r0));
        rep.param("mode", mode);
        produced = purify_cylinder(g, r0, mode == "inner" ? PurifyMode::InnerContact : PurifyMode::OuterContact, tol);
        chart_lines(rep, *produced, check_cylinder(*produced, tol));
      } else if (op == "extend") {
        rep.param("r0", format_double(r0));
        rep.param("R", format_double(R));
        std::size_t nr = g.axes.size() == 2 ? g.axes[1].n : 0;
        produced = extend_cell(g, r0, R, nr, tol);
        chart_lines(rep, *produced, check_cylinder(*produced, tol));
      } else {
        rep.param("step", format_double(step));
        rep.add("convention", "increasing theta, dz/dtheta = f(theta, z)");
        if (z0s.empty()) z0s = {-0.5, 0.0, 0.5};
        for (double z : z0s) {
          double z1 = holonomy_map(g, z, step);
          rep.add("holonomy.z0=" + format_double(z), "z1=" + format_double(z1) + " displacement=" + format_double(z1 - z));
        }
      }
      if (produced && !out_path.empty()) {
        std::ofstream o(out_path, std::ios::binary);
        if (!o) throw Error("io", "cannot write " + out_path);
        o << print_grid(*produced);
        rep.add("output", out_path + " sha256:" + sha256_hex(print_grid(*produced)));
      }
      out << rep.render();
      return 0;
    }
    if (selftest->parsed()) {
      rep.subcommand = "selftest";
      std::uint64_t seed = 0;
      if (const char* s = std::getenv("BSGATE_SEED")) seed = std::strtoull(s, nullptr, 10);
      rep.param("seed", std::to_string(seed));
      int checked = 0;
      for (std::uint64_t i = 0; i < 20; ++i) {
        auto c = random_complex(seed * 1000 + i);
        for (auto k : {SystemKind::NegTisc, SystemKind::PosTisc, SystemKind::Isc}) {
          auto s = build_system(c, k);
          auto cert = feasible(s);
          if (!verify_certificate(s, cert)) throw Error("InvariantViolation", "certificate failed verification");
          auto bf = brute_force(s, 3);
          if (bf && cert.verdict == Verdict::Infeasible) throw Error("InvariantViolation", "oracle disagreement");
          ++checked;
        }
      }
      rep.add("systems_checked", std::to_string(checked));
      rep.add("result", "pass");
      out << rep.render();
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return 1;
}

}  // namespace bsgate
