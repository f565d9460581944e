// abgame -- solve AB / ABB games, reproduce value tables and run the
// end-game lower-bound and two-phase upper-bound pipelines.
//
// Exit codes: 0 ok, 2 invalid parameters, 3 node/time budget exhausted
// without a verdict, 4 a pipeline case failed verification.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abgame/abgame.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;
constexpr int kExitVerify = 4;

struct Common {
  unsigned workers = 1;
  std::uint64_t max_nodes = 0;
  double time_limit = 0;
  std::string out;
  std::string format = "text";
  bool canonical_cache = false;

  abgame::SolverOptions solver_options() const {
    abgame::SolverOptions o;
    o.workers = workers;
    o.max_nodes = max_nodes;
    o.time_limit = std::chrono::milliseconds(static_cast<long long>(time_limit * 1000));
    o.canonical_cache = canonical_cache;
    return o;
  }

  json to_json() const {
    return {{"workers", workers}, {"max_nodes", max_nodes}, {"time_limit", time_limit},
            {"canonical_cache", canonical_cache}};
  }

  /// --out, else $ABGAME_OUT_DIR, else no artifacts.
  std::optional<fs::path> out_dir() const {
    std::string dir = out;
    if (dir.empty())
      if (const char* env = std::getenv("ABGAME_OUT_DIR")) dir = env;
    if (dir.empty()) return std::nullopt;
    fs::create_directories(dir);
    return fs::path(dir);
  }
};

void add_common(CLI::App* app, Common& c, std::vector<std::string> formats) {
  app->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 256u));
  app->add_option("--max-nodes", c.max_nodes, "node budget (0 = unlimited)");
  app->add_option("--time-limit", c.time_limit, "time budget in seconds (0 = unlimited)")->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "artifact directory (default: $ABGAME_OUT_DIR)");
  app->add_option("--format", c.format, "stdout format")->check(CLI::IsMember(formats));
  app->add_flag("--canonical-cache", c.canonical_cache, "key the transposition cache by color-canonical sets");
}

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_file(const fs::path& path, const std::string& text, json& artifacts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  artifacts.push_back(path.string());
}

void write_manifest(const fs::path& dir, const std::string& stem, json manifest) {
  const fs::path path = dir / (stem + ".manifest.json");
  manifest["artifacts"].push_back(path.string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
}

std::string game_name(const abgame::GameSpec& spec) {
  using abgame::Variant;
  const std::string pc = std::to_string(spec.pegs) + "," + std::to_string(spec.colors);
  switch (abgame::variant_of(spec)) {
    case Variant::ab:
      return "ab(" + pc + ")";
    case Variant::abb:
      return "abb(" + pc + ")";
    case Variant::ab_star:
      return "ab_*(" + pc + ")";
    case Variant::ab_fixed:
      return "ab^*(" + pc + "," + std::to_string(spec.opening) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  int pegs = 0, colors = 0, opening = 0, budget = 16;
  std::string variant = "ab";
  std::optional<int> prove_upper, prove_lower;
  Common common;
};

int cmd_solve(const SolveArgs& a) {
  const abgame::Variant variant = abgame::parse_variant(a.variant);
  const abgame::GameSpec spec = abgame::make_spec(variant, a.pegs, a.colors, a.opening);
  if (a.budget < 1) throw std::invalid_argument("budget must be at least 1");
  Clock clock;
  abgame::Solver solver(spec, a.common.solver_options());
  abgame::SolveResult r;
  const bool want_tree = a.common.format == "tree" || a.common.out_dir().has_value();

  std::string stem = std::string("solve_") + abgame::to_string(variant) + "_p" + std::to_string(a.pegs) + "_c" +
                     std::to_string(a.colors);
  if (a.opening) stem += "_x" + std::to_string(a.opening);
  json params = {{"pegs", a.pegs}, {"colors", a.colors}, {"variant", a.variant}, {"opening", a.opening},
                 {"budget", a.budget}};
  if (a.prove_upper) params["prove_upper"] = *a.prove_upper;
  if (a.prove_lower) params["prove_lower"] = *a.prove_lower;
  params.update(a.common.to_json());

  try {
    if (a.prove_upper) {
      r = solver.prove_upper(*a.prove_upper, want_tree);
    } else if (a.prove_lower) {
      if (solver.prove_lower(*a.prove_lower)) {
        r.value = *a.prove_lower;
        r.status = abgame::SolveStatus::lower_bound_only;
      } else {
        r = solver.prove_upper(*a.prove_lower - 1, want_tree);
      }
      r.nodes = solver.nodes();
    } else {
      r = solver.solve_exact(a.budget, want_tree);
    }
  } catch (const abgame::SearchLimitExceeded& e) {
    if (auto dir = a.common.out_dir())
      write_manifest(*dir, stem,
                     {{"command", "solve"},
                      {"parameters", params},
                      {"result", {{"status", "budget-exhausted"}, {"reason", e.what()}}},
                      {"nodes", solver.nodes()},
                      {"wall_seconds", clock.seconds()},
                      {"artifacts", json::array()}});
    throw;
  }
  const double wall = clock.seconds();

  if (r.tree) {
    auto rep = abgame::replay(*r.tree, solver.secrets(), spec, r.value);
    if (!rep.ok) {
      std::cerr << "strategy replay failed: " << rep.error << '\n';
      return kExitVerify;
    }
  }

  const abgame::ValueRow row{a.pegs, a.colors, variant, a.opening, r.value, abgame::to_string(r.status)};
  const char* rel = r.status == abgame::SolveStatus::exact ? " = " : r.status == abgame::SolveStatus::lower_bound_only ? " >= " : " <= ";
  if (a.common.format == "csv") {
    abgame::write_values_csv(std::cout, {row});
  } else {
    std::cout << game_name(spec) << rel << r.value << "  (" << abgame::to_string(r.status) << ", " << r.nodes
              << " nodes, " << std::fixed << std::setprecision(3) << wall << " s)\n";
    if (a.common.format == "tree" && r.tree) abgame::print_strategy(std::cout, *r.tree, spec);
  }

  if (auto dir = a.common.out_dir()) {
    json artifacts = json::array();
    std::ostringstream csv;
    abgame::write_values_csv(csv, {row});
    write_file(*dir / (stem + ".csv"), csv.str(), artifacts);
    if (r.tree) write_file(*dir / (stem + ".tree.json"), abgame::strategy_text({spec, r.value, *r.tree}), artifacts);
    write_manifest(*dir, stem,
                   {{"command", "solve"},
                    {"parameters", params},
                    {"result", {{"value", r.value}, {"status", abgame::to_string(r.status)}}},
                    {"nodes", r.nodes},
                    {"wall_seconds", wall},
                    {"artifacts", artifacts}});
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// table

struct TableArgs {
  int p_min = 2, p_max = 4, c_min = 0, c_max = 13, opening = 0, budget = 16;
  std::string variant = "ab", layout = "grid";
  Common common;
};

struct Cell {
  abgame::ValueRow row;
  std::uint64_t nodes = 0;
  std::string reason;
};

Cell solve_cell(abgame::Variant v, int p, int c, int opening, int budget, const Common& common) {
  Cell cell{{p, c, v, opening, std::nullopt, ""}, 0, ""};
  const abgame::GameSpec spec = abgame::make_spec(v, p, c, opening);
  abgame::Solver solver(spec, common.solver_options());
  try {
    auto r = solver.solve_exact(budget, false);
    cell.row.value = r.value;
    cell.row.status = abgame::to_string(r.status);
  } catch (const abgame::SearchLimitExceeded& e) {
    cell.row.status = "budget-exhausted";
    cell.reason = e.what();
  }
  cell.nodes = solver.nodes();
  return cell;
}

std::string cell_text(const abgame::ValueRow& r) {
  if (!r.value) return abgame::kMissingCell;
  if (r.status == "lower-bound-only") return ">=" + std::to_string(*r.value);
  return std::to_string(*r.value);
}

int cmd_table(const TableArgs& a) {
  const abgame::Variant variant = abgame::parse_variant(a.variant);
  Clock clock;
  std::vector<Cell> cells;
  abgame::Table table;
  if (a.layout == "grid") {
    const int c_lo = a.c_min > 0 ? a.c_min : a.p_min;
    table.corner = "p\\c";
    for (int c = c_lo; c <= a.c_max; ++c) table.columns.push_back(std::to_string(c));
    for (int p = a.p_min; p <= a.p_max; ++p) {
      table.rows.push_back(std::to_string(p));
      std::vector<std::string> line;
      for (int c = c_lo; c <= a.c_max; ++c) {
        if (c < p || (a.opening && a.opening * p > c)) {
          line.emplace_back();
          continue;
        }
        cells.push_back(solve_cell(variant, p, c, a.opening, a.budget, a.common));
        line.push_back(cell_text(cells.back().row));
      }
      table.cells.push_back(std::move(line));
    }
  } else {
    // One column per p: ab(p,p), the counting bound and abb(p,p).
    table.corner = "p";
    table.rows = {"ab(p,p)", "qmin(p)", "abb(p,p)"};
    table.cells.assign(3, {});
    for (int p = a.p_min; p <= a.p_max; ++p) {
      table.columns.push_back(std::to_string(p));
      table.cells[1].push_back(std::to_string(abgame::formulas::qmin(p)));
      for (auto [v, i] : {std::pair{abgame::Variant::ab, 0}, std::pair{abgame::Variant::abb, 2}}) {
        cells.push_back(solve_cell(v, p, p, 0, a.budget, a.common));
        table.cells[static_cast<std::size_t>(i)].push_back(cell_text(cells.back().row));
      }
    }
  }
  const double wall = clock.seconds();

  std::vector<abgame::ValueRow> rows;
  for (const Cell& c : cells) rows.push_back(c.row);
  if (a.common.format == "csv")
    abgame::write_values_csv(std::cout, rows);
  else
    table.write_text(std::cout);

  bool exhausted = false;
  json reasons = json::array();
  for (const Cell& c : cells) {
    if (c.reason.empty()) continue;
    exhausted = true;
    reasons.push_back({{"p", c.row.pegs}, {"c", c.row.colors}, {"reason", c.reason}, {"nodes", c.nodes}});
  }
  if (auto dir = a.common.out_dir()) {
    const std::string stem = std::string("table_") + abgame::to_string(variant) + "_" + a.layout + "_p" +
                             std::to_string(a.p_min) + "-" + std::to_string(a.p_max);
    json artifacts = json::array();
    std::ostringstream csv, grid_csv, text;
    abgame::write_values_csv(csv, rows);
    table.write_csv(grid_csv);
    table.write_text(text);
    write_file(*dir / (stem + ".values.csv"), csv.str(), artifacts);
    write_file(*dir / (stem + ".csv"), grid_csv.str(), artifacts);
    write_file(*dir / (stem + ".txt"), text.str(), artifacts);
    std::uint64_t nodes = 0;
    json values = json::array();
    for (const Cell& c : cells) {
      nodes += c.nodes;
      values.push_back(abgame::csv_line(c.row));
    }
    json params = {{"p_min", a.p_min}, {"p_max", a.p_max}, {"c_min", a.c_min}, {"c_max", a.c_max},
                   {"variant", a.variant}, {"opening", a.opening}, {"budget", a.budget}, {"layout", a.layout}};
    params.update(a.common.to_json());
    write_manifest(*dir, stem,
                   {{"command", "table"},
                    {"parameters", params},
                    {"result", {{"values", values}, {"skipped", reasons}}},
                    {"nodes", nodes},
                    {"wall_seconds", wall},
                    {"artifacts", artifacts}});
  }
  return exhausted ? kExitBudget : kExitOk;
}

// ---------------------------------------------------------------------------
// lower

struct LowerArgs {
  int pegs = 0, r = 0, q = 0;
  Common common;
};

int cmd_lower(const LowerArgs& a) {
  namespace eg = abgame::endgame;
  if (a.pegs < 2 || a.pegs > 5) throw std::invalid_argument("lower supports 2 <= p <= 5");
  if (a.r < 1 || a.r > 30) throw std::invalid_argument("need 1 <= r <= 30");
  if (a.q < 1) throw std::invalid_argument("need q >= 1");
  Clock clock;
  const auto states = eg::enumerate_nonreducible(a.pegs, a.r);
  std::vector<eg::Verdict> verdicts;
  for (const auto& s : states) verdicts.push_back(eg::state_unsolvable_within(s, a.q, a.common.solver_options()));
  const bool ok = std::all_of(verdicts.begin(), verdicts.end(), [](const eg::Verdict& v) { return v.unsolvable; });
  std::string statement = "no bound: some state is solvable within " + std::to_string(a.q);
  if (ok) statement = eg::lower_bound_abb(a.pegs, a.r, a.q, verdicts).describe();
  const double wall = clock.seconds();

  std::ostringstream csv;
  csv << "state,secrets,budget,verdict,nodes\n";
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    csv << i + 1 << ',' << v.secrets << ',' << v.budget << ',' << (v.unsolvable ? "unsolvable" : "SOLVABLE") << ','
        << v.nodes << '\n';
  }
  if (a.common.format == "csv") {
    std::cout << csv.str();
  } else {
    std::cout << states.size() << " non-reducible states for p=" << a.pegs << ", r=" << a.r << '\n';
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      const auto& v = verdicts[i];
      std::cout << "state " << i + 1 << ": " << v.secrets << " secrets, "
                << (v.unsolvable ? "unsolvable" : "SOLVABLE") << " in " << v.budget << ", " << v.nodes << " nodes\n";
      std::istringstream rows(eg::to_string(v.state));
      for (std::string line; std::getline(rows, line);) std::cout << "  " << line << '\n';
    }
    std::cout << statement << '\n';
  }

  if (auto dir = a.common.out_dir()) {
    const std::string stem =
        "lower_p" + std::to_string(a.pegs) + "_r" + std::to_string(a.r) + "_q" + std::to_string(a.q);
    json artifacts = json::array();
    write_file(*dir / (stem + ".csv"), csv.str(), artifacts);
    std::string state_text;
    for (const auto& s : states) state_text += eg::to_string(s) + "\n";
    write_file(*dir / (stem + ".states.txt"), state_text, artifacts);
    std::uint64_t nodes = 0;
    for (const auto& v : verdicts) nodes += v.nodes;
    json params = {{"pegs", a.pegs}, {"r", a.r}, {"q", a.q}};
    params.update(a.common.to_json());
    write_manifest(*dir, stem,
                   {{"command", "lower"},
                    {"parameters", params},
                    {"result", {{"states", states.size()}, {"verified", ok}, {"statement", statement}}},
                    {"nodes", nodes},
                    {"wall_seconds", wall},
                    {"artifacts", artifacts}});
  }
  return ok ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------
// upper

struct UpperArgs {
  int pegs = 0, colors = 0, q = 0, x = 0;
  std::string mode = "generalizing";
  Common common;
};

int cmd_upper(const UpperArgs& a) {
  namespace tp = abgame::twophase;
  if (a.pegs < 2 || a.pegs > 5) throw std::invalid_argument("upper supports 2 <= p <= 5");
  abgame::abb_spec(a.pegs, a.colors).validate();
  Clock clock;
  const tp::UpperMode mode = a.mode == "fixed" ? tp::UpperMode::fixed : tp::UpperMode::generalizing;
  const tp::UpperReport report = tp::verify_upper_bound(a.pegs, a.colors, a.q, a.x, mode, a.common.solver_options());
  const double wall = clock.seconds();

  std::ostringstream csv;
  csv << "sequence,candidates,budget,verdict,nodes\n";
  for (const auto& c : report.cases)
    csv << '"' << tp::to_string(c.sequence) << "\"," << c.candidates << ',' << c.budget << ','
        << tp::to_string(c.verdict) << ',' << c.nodes << '\n';
  if (a.common.format == "csv") {
    std::cout << csv.str();
  } else {
    std::cout << report.cases.size() << " answer sequences for p=" << a.pegs << ", c=" << a.colors << ", x=" << a.x
              << '\n';
    for (const auto& c : report.cases)
      std::cout << "  " << tp::to_string(c.sequence) << "  " << c.candidates << " candidates, "
                << tp::to_string(c.verdict) << " in " << c.budget << ", " << c.nodes << " nodes\n";
    std::cout << report.statement() << '\n';
  }

  if (auto dir = a.common.out_dir()) {
    const std::string stem = "upper_p" + std::to_string(a.pegs) + "_c" + std::to_string(a.colors) + "_q" +
                             std::to_string(a.q) + "_x" + std::to_string(a.x) + "_" + a.mode;
    json artifacts = json::array();
    write_file(*dir / (stem + ".csv"), csv.str(), artifacts);
    std::uint64_t nodes = 0;
    for (const auto& c : report.cases) nodes += c.nodes;
    json params = {{"pegs", a.pegs}, {"colors", a.colors}, {"q", a.q}, {"x", a.x}, {"mode", a.mode}};
    params.update(a.common.to_json());
    write_manifest(*dir, stem,
                   {{"command", "upper"},
                    {"parameters", params},
                    {"result",
                     {{"cases", report.cases.size()}, {"verified", report.all_solved}, {"statement", report.statement()}}},
                    {"nodes", nodes},
                    {"wall_seconds", wall},
                    {"artifacts", artifacts}});
  }
  return report.all_solved ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and bound pipelines for the AB game and its black-peg variant"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "worst-case number of questions for one game");
  s->add_option("--pegs,-p", solve.pegs)->required();
  s->add_option("--colors,-c", solve.colors)->required();
  s->add_option("--variant", solve.variant)->check(CLI::IsMember({"ab", "abb", "ab_star", "ab_fixed"}));
  s->add_option("--opening,-x", solve.opening, "fixed opening questions (ab_fixed)");
  s->add_option("--budget", solve.budget, "largest depth searched");
  auto* pu = s->add_option("--prove-upper", solve.prove_upper, "only decide whether Q questions suffice");
  s->add_option("--prove-lower", solve.prove_lower, "only decide whether Q questions are necessary")->excludes(pu);
  add_common(s, solve.common, {"csv", "text", "tree"});

  TableArgs table;
  auto* t = app.add_subcommand("table", "batch of solves laid out as a p-by-c grid or an equal-pegs-colors table");
  t->add_option("--pegs-min", table.p_min);
  t->add_option("--pegs-max", table.p_max);
  t->add_option("--colors-min", table.c_min, "default: pegs-min");
  t->add_option("--colors-max", table.c_max);
  t->add_option("--variant", table.variant)->check(CLI::IsMember({"ab", "abb", "ab_star", "ab_fixed"}));
  t->add_option("--opening,-x", table.opening);
  t->add_option("--budget", table.budget, "largest depth searched");
  t->add_option("--layout", table.layout)->check(CLI::IsMember({"grid", "equal"}));
  add_common(t, table.common, {"csv", "text"});

  LowerArgs lower;
  auto* l = app.add_subcommand("lower", "enumerate non-reducible end-game states and refute them within q questions");
  l->add_option("--pegs,-p", lower.pegs)->required();
  l->add_option("--r,-r", lower.r, "colors per row")->required();
  l->add_option("--q,-q", lower.q, "question budget")->required();
  add_common(l, lower.common, {"csv", "text"});

  UpperArgs upper;
  auto* u = app.add_subcommand("upper", "verify every end-game of the cyclic reduction phase");
  u->add_option("--pegs,-p", upper.pegs)->required();
  u->add_option("--colors,-c", upper.colors)->required();
  u->add_option("--q,-q", upper.q, "total questions")->required();
  u->add_option("--x,-x", upper.x, "reduction questions")->required();
  u->add_option("--mode", upper.mode)->check(CLI::IsMember({"generalizing", "fixed"}));
  add_common(u, upper.common, {"csv", "text"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*t) return cmd_table(table);
    if (*l) return cmd_lower(lower);
    if (*u) return cmd_upper(upper);
  } catch (const abgame::SearchLimitExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitInvalid;
}
