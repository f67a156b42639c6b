#include "cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cty/verify.hpp"
#include "json.hpp"

namespace cty::cli {

namespace {

using json = nlohmann::ordered_json;

struct Config {
  std::string command;
  std::string matrix, input;
  int level = 2;
  std::string window;
  std::string mode = "trivial";
  std::string format = "json";
  bool text = false;
  bool full = false;
  std::size_t budget = 0;
  int step = 0;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Problem {
  CartanData cd;
  std::optional<SignColoring> sc;
  int level = 2;
};

IntMatrix parse_matrix(const json& j) {
  if (!j.is_array()) throw Usage("matrix must be a JSON array of rows");
  IntMatrix m;
  for (const auto& row : j) {
    if (!row.is_array()) throw Usage("matrix must be a JSON array of rows");
    std::vector<int> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw Usage("matrix entries must be integers");
      r.push_back(x.get<int>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

Problem load(const Config& cfg, bool level_given) {
  json in;
  if (!cfg.matrix.empty() && !cfg.input.empty()) throw Usage("give either --matrix or --input");
  try {
    if (!cfg.matrix.empty()) {
      in["cartan"] = json::parse(cfg.matrix);
    } else if (!cfg.input.empty()) {
      std::ifstream f(cfg.input);
      if (!f) throw Usage("cannot read " + cfg.input);
      in = json::parse(f);
    } else {
      throw Usage("--matrix or --input is required");
    }
  } catch (const json::exception& e) {
    throw Usage(std::string("bad JSON: ") + e.what());
  }
  if (!in.is_object() || !in.contains("cartan")) throw Usage("input needs a \"cartan\" matrix");
  Problem p;
  p.cd = validate_cartan(parse_matrix(in["cartan"]));
  p.level = cfg.level;
  if (!level_given && in.contains("level")) p.level = in["level"].get<int>();
  if (p.level < 2) throw Usage("level must be at least 2");
  if (in.contains("signs") || in.contains("colors")) {
    SignColoring sc;
    for (const auto& s : in.value("signs", json::array())) {
      if (s != "+" && s != "-") throw Usage("signs are \"+\" or \"-\"");
      sc.sign.push_back(s == "+" ? 1 : -1);
    }
    for (const auto& c : in.value("colors", json::array())) {
      if (c != "a" && c != "b" && c != "-") throw Usage("colors are \"a\", \"b\" or \"-\"");
      sc.color.push_back(c == "a" ? Color::Alpha : c == "b" ? Color::Beta : Color::None);
    }
    if (static_cast<int>(sc.sign.size()) != p.cd.r) throw Usage("one sign per vertex");
    if (sc.color.empty()) sc.color.assign(p.cd.r, Color::None);
    if (static_cast<int>(sc.color.size()) != p.cd.r) throw Usage("one color per vertex");
    p.sc = sc;
  }
  return p;
}

bool is_rank2_form(const CartanData& cd) {
  return cd.r == 2 && cd.C[0][1] == -1 && cd.C[1][0] == -cd.d[0] && cd.d[1] == 1;
}

Construction build(const Problem& p) {
  if (!is_tamely_laced(p.cd)) throw Usage("matrix is not tamely laced");
  if (p.sc) return construct(p.cd, *p.sc, p.level);
  if (is_rank2_form(p.cd)) return rank2_construction(p.cd.t, p.level);
  return construct(p.cd, p.level);
}

std::pair<int, int> parse_window(const std::string& w, int t) {
  if (w.empty()) return {-2 * t, 2 * t};
  try {
    auto sep = w.find_first_of(",:");
    if (sep == std::string::npos) {
      int k = std::stoi(w);
      if (k < 0) throw Usage("window radius must be nonnegative");
      return {-k, k};
    }
    return {std::stoi(w.substr(0, sep)), std::stoi(w.substr(sep + 1))};
  } catch (const std::logic_error&) {
    throw Usage("window is N or NMIN,NMAX");
  }
}

std::string label_name(const AnnotatedQuiver& q, int v) { return q.name(v); }

std::string vector_str(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// --- subcommands --------------------------------------------------------

int check_cartan(const Config& cfg, bool level_given, std::ostream& out) {
  Problem p = load(cfg, level_given);
  const bool tame = is_tamely_laced(p.cd);
  const bool connected = dynkin_graph(p.cd).connected();
  std::string msg = tame ? "tamely laced, D=diag(" + vector_str(p.cd.d) + "), t=" + std::to_string(p.cd.t)
                         : "not tamely laced";
  if (!connected) msg += " (decomposable)";
  if (cfg.format == "text") {
    out << msg << "\n";
  } else if (cfg.format == "dot") {
    auto g = dynkin_graph(p.cd);
    out << "graph dynkin {\n";
    for (int a = 0; a < p.cd.r; ++a)
      out << "  v" << a << " [label=\"" << a + 1 << " (d=" << p.cd.d[a] << ")\"];\n";
    for (const auto& e : g.edges) out << "  v" << e.a << " -- v" << e.b << " [label=\"" << e.mult << "\"];\n";
    out << "}\n";
  } else {
    json j;
    j["matrix"] = p.cd.C;
    j["d"] = p.cd.d;
    j["t"] = p.cd.t;
    j["tamely_laced"] = tame;
    j["indecomposable"] = connected;
    j["message"] = msg;
    out << j.dump(2) << "\n";
  }
  return tame && connected ? 0 : 1;
}

json quiver_json(const AnnotatedQuiver& q) { return json::parse(to_json(q)); }

void quiver_text(const AnnotatedQuiver& q, std::ostream& out) {
  out << q.size() << " vertices\n";
  for (int i = 0; i < q.size(); ++i)
    out << "  " << q.name(i) << " " << (q.sign(i) > 0 ? '+' : '-') << " " << static_cast<char>(q.ctype(i)) << "\n";
  for (int i = 0; i < q.size(); ++i)
    for (int j = 0; j < q.size(); ++j)
      if (q.b(i, j) > 0) out << "  " << q.name(i) << " -> " << q.name(j) << (q.b(i, j) > 1 ? " x" + std::to_string(q.b(i, j)) : "") << "\n";
}

int build_quiver_cmd(const Config& cfg, bool level_given, std::ostream& out) {
  auto c = build(load(cfg, level_given));
  if (cfg.format == "dot") {
    out << to_dot(c.q0);
  } else if (cfg.format == "text") {
    quiver_text(c.q0, out);
  } else {
    json j;
    j["t"] = c.ext.cd.t;
    j["quiver"] = quiver_json(c.q0);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int schedule_cmd(const Config& cfg, bool level_given, std::ostream& out) {
  auto c = build(load(cfg, level_given));
  if (cfg.format == "dot") throw Usage("schedule has no dot output");
  if (cfg.format == "text") {
    for (int p = 0; p < 2 * c.schedule.t; ++p) {
      out << "step " << p << ":";
      for (int v : c.schedule.batch[p]) out << " " << label_name(c.q0, v);
      out << "\n";
    }
    return 0;
  }
  json j;
  j["t"] = c.schedule.t;
  j["batches"] = json::array();
  for (const auto& b : c.schedule.batch) {
    auto arr = json::array();
    for (int v : b) arr.push_back(label_name(c.q0, v));
    j["batches"].push_back(arr);
  }
  out << j.dump(2) << "\n";
  return 0;
}

RunTrace do_run(const Construction& c, int level, const Config& cfg, SeedMode mode) {
  RunOptions o;
  std::tie(o.nmin, o.nmax) = parse_window(cfg.window, c.ext.cd.t);
  if (o.nmin > 0 || o.nmax < 0) throw Usage("window must contain 0");
  o.mode = mode;
  o.budget = cfg.budget;
  return run(c, level, o);
}

SeedMode seed_mode(const std::string& m) { return m == "semifield" ? SeedMode::WithCoefficients : SeedMode::Trivial; }

int run_cmd(const Config& cfg, bool level_given, std::ostream& out) {
  Problem p = load(cfg, level_given);
  auto c = build(p);
  if (cfg.format == "dot") throw Usage("run has no dot output");
  auto tr = do_run(c, p.level, cfg, seed_mode(cfg.mode));
  if (cfg.format == "text") {
    for (const auto& [k, v] : tr.x) out << "x" << to_string(k) << " = " << v.to_string() << "\n";
    for (const auto& [k, v] : tr.y) out << "y" << to_string(k) << " = " << v.to_string() << "\n";
    for (const auto& s : tr.conflicts) out << "conflict " << s << "\n";
    if (tr.budget_hit) out << "budget exceeded\n";
  } else {
    json j;
    j["window"] = {tr.opt.nmin, tr.opt.nmax};
    j["mode"] = cfg.mode;
    j["reached"] = {tr.reached_min, tr.reached_max};
    j["budget_exceeded"] = tr.budget_hit;
    j["x"] = json::object();
    for (const auto& [k, v] : tr.x) j["x"][to_string(k)] = v.to_string();
    j["y"] = json::object();
    for (const auto& [k, v] : tr.y) j["y"][to_string(k)] = v.to_string();
    j["conflicts"] = tr.conflicts;
    out << j.dump(2) << "\n";
  }
  return tr.conflicts.empty() ? 0 : 1;
}

int emit_reports(const std::vector<Report>& reports, const RunTrace* tr, const Config& cfg, std::ostream& out) {
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok();
  if (tr) ok = ok && tr->conflicts.empty();
  if (cfg.format == "dot") throw Usage("reports have no dot output");
  if (cfg.format == "text") {
    for (const auto& r : reports) {
      out << r.summary() << "\n";
      for (const auto& e : r.entries)
        if (cfg.full || e.status != "pass") out << "  " << e.status << " " << e.relation << "\n";
    }
    if (tr && !tr->conflicts.empty()) out << tr->conflicts.size() << " labeling conflicts\n";
    out << (ok ? "PASS" : "FAIL") << "\n";
  } else {
    json j;
    j["ok"] = ok;
    if (tr) {
      j["window"] = {tr->opt.nmin, tr->opt.nmax};
      j["budget_exceeded"] = tr->budget_hit;
      j["conflicts"] = tr->conflicts;
    }
    j["reports"] = json::array();
    for (const auto& r : reports) j["reports"].push_back(json::parse(r.to_json(cfg.full)));
    out << j.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

int verify_t_cmd(const Config& cfg, bool level_given, std::ostream& out) {
  Problem p = load(cfg, level_given);
  auto c = build(p);
  auto tr = do_run(c, p.level, cfg, seed_mode(cfg.mode));
  std::vector<Report> reports{verify_t(tr, cfg.full)};
  if (tr.opt.mode == SeedMode::Trivial) reports.push_back(verify_laurent(tr));
  return emit_reports(reports, &tr, cfg, out);
}

int verify_y_cmd(const Config& cfg, bool level_given, std::ostream& out) {
  Problem p = load(cfg, level_given);
  auto c = build(p);
  auto tr = do_run(c, p.level, cfg, SeedMode::CoefficientsOnly);
  return emit_reports({verify_y(tr, cfg.full)}, &tr, cfg, out);
}

int verify_periodicity_cmd(const Config& cfg, bool level_given, std::ostream& out) {
  Problem p = load(cfg, level_given);
  auto c = build(p);
  const bool rank2 = !p.sc && is_rank2_form(p.cd);
  return emit_reports({verify_periodicity(c, rank2), verify_structure(c, p.level)}, nullptr, cfg, out);
}

int export_cmd(const Config& cfg, bool level_given, std::ostream& out) {
  auto c = build(load(cfg, level_given));
  AnnotatedQuiver q = c.q0;
  const int period = 2 * c.schedule.t;
  for (int n = 0; n < ((cfg.step % period) + period) % period; ++n) q = composite_mutate(q, c.schedule.batch[n]);
  if (cfg.format == "dot") {
    out << to_dot(q);
  } else if (cfg.format == "text") {
    out << "step " << cfg.step << "\n";
    quiver_text(q, out);
  } else {
    json j;
    j["t"] = c.schedule.t;
    j["step"] = cfg.step;
    j["quiver"] = quiver_json(q);
    j["batches"] = json::array();
    for (const auto& b : c.schedule.batch) {
      auto arr = json::array();
      for (int v : b) arr.push_back(label_name(c.q0, v));
      j["batches"].push_back(arr);
    }
    out << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cluster algebra realization of restricted T- and Y-systems", "cluster-ty"};
  app.require_subcommand(1);
  Config cfg;

  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const Config&, bool, std::ostream&);
    bool window;
  };
  static const Cmd cmds[] = {
      {"check-cartan", "validate a Cartan matrix and report D and t", check_cartan, false},
      {"build-quiver", "build the initial quiver Q(0)", build_quiver_cmd, false},
      {"schedule", "list the 2t mutation batches", schedule_cmd, false},
      {"run", "mutate through a window and print the labeled variables", run_cmd, true},
      {"verify-t", "check the T-system on a window", verify_t_cmd, true},
      {"verify-y", "check the Y-system on a window", verify_y_cmd, true},
      {"verify-periodicity", "check that the 2t-batch cycle closes", verify_periodicity_cmd, false},
      {"export", "export the quiver at a given step", export_cmd, false},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  CLI::Option* level_opt_any = nullptr;
  std::vector<CLI::Option*> level_opts;
  for (const auto& c : cmds) {
    auto* s = app.add_subcommand(c.name, c.help);
    s->add_option("--matrix", cfg.matrix, "Cartan matrix as JSON, e.g. [[2,-1],[-5,2]]");
    s->add_option("--input", cfg.input, "JSON file with \"cartan\" and optional \"signs\", \"colors\", \"level\"");
    if (c.name != std::string("check-cartan")) {
      level_opt_any = s->add_option("--level", cfg.level, "level l >= 2");
      level_opts.push_back(level_opt_any);
    }
    s->add_option("--format", cfg.format, "json | dot | text")->check(CLI::IsMember({"json", "dot", "text"}));
    s->add_flag("--text", cfg.text, "same as --format text");
    if (c.window) {
      s->add_option("--window", cfg.window, "N for [-N,N] or NMIN,NMAX (default 2t)");
      s->add_option("--budget", cfg.budget, "max terms per produced variable, 0 = unlimited");
      s->add_flag("--full", cfg.full, "print both sides of every relation");
    }
    if (c.name == std::string("run") || c.name == std::string("verify-t"))
      s->add_option("--mode", cfg.mode, "trivial | semifield")->check(CLI::IsMember({"trivial", "semifield"}));
    if (c.name == std::string("verify-periodicity")) s->add_flag("--full", cfg.full, "list every check");
    if (c.name == std::string("export")) s->add_option("--step", cfg.step, "batches applied to Q(0)");
    subs.push_back({s, &c});
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      for (auto [s, c] : subs)
        if (s->parsed()) {
          out << s->help();
          return 0;
        }
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }
  if (cfg.text) cfg.format = "text";
  bool level_given = false;
  for (auto* o : level_opts) level_given = level_given || o->count() > 0;

  for (auto [s, c] : subs) {
    if (!s->parsed()) continue;
    try {
      return c->fn(cfg, level_given, out);
    } catch (const Usage& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}

}  // namespace cty::cli
