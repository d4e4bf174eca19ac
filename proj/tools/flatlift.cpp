// flatlift: exact finite-poset combinatorics (crowns, flatness, quasitrees,
// Mitchell's criterion) and constructive lifting of stably commutative
// diagrams of Z/p^k-modules to strict diagrams of pure monomorphisms.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "flatlift/census.hpp"
#include "flatlift/examples_suite.hpp"
#include "flatlift/io.hpp"
#include "flatlift/lifting.hpp"
#include "flatlift/testgen.hpp"

namespace {

using namespace flatlift;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::unknown_name:
    case Errc::duplicate_name:
    case Errc::bad_parameter:
      return kExitInputError;
    default:
      return kExitCheckFailed;
  }
}

Poset load_poset(const std::string& file, const std::string& gen) {
  require(file.empty() != gen.empty(), Errc::parse_error,
          "give exactly one of --in FILE or --gen SPEC");
  if (!gen.empty()) return generate_poset(gen);
  std::ifstream in(file);
  require(in.good(), Errc::parse_error, "cannot open " + file);
  return parse_poset(in);
}

Prediagram load_diagram(const std::string& file, const Poset& shape) {
  std::ifstream in(file);
  require(in.good(), Errc::parse_error, "cannot open " + file);
  return parse_diagram(in, shape);
}

const char* yn(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------

int cmd_poset(const std::string& file, const std::string& gen, const std::string& what,
              const std::string& crown_dir) {
  Poset P = load_poset(file, gen);

  if (what == "info") {
    std::cout << "elements (" << P.size() << "):";
    for (const auto& n : P.names()) std::cout << " " << n;
    std::cout << "\nstrict relations: " << P.strict_pairs().size()
              << ", covers: " << P.cover_pairs().size() << "\n";
    auto flat = flatness_check(P);
    bool crown = is_crown(P);
    bool qt = quasitree_check(P);
    auto mit = mitchell_check(P);
    std::cout << "crown: " << yn(crown) << ", ind-flat: " << yn(flat.ind_flat)
              << ", pro-flat: " << yn(flat.pro_flat) << ", quasitree: " << yn(qt)
              << ", mitchell dimension <= 2: " << yn(mit.dimension_le_2) << "\n";
    std::cout << "RESULT elements=" << P.size() << " crown=" << yn(crown)
              << " ind_flat=" << yn(flat.ind_flat) << " pro_flat=" << yn(flat.pro_flat)
              << " quasitree=" << yn(qt) << " mitchell_dim_le_2=" << yn(mit.dimension_le_2)
              << "\n";
    return kExitOk;
  }

  if (what == "crown") {
    CrownMode mode = crown_dir == "pro" ? CrownMode::pro : CrownMode::ind;
    auto c = crown_of(P, mode);
    std::cout << (mode == CrownMode::ind ? "ind" : "pro") << "-crown elements ("
              << c.poset.size() << "):";
    for (const auto& n : c.poset.names()) std::cout << " " << n;
    std::cout << "\nrelations:";
    for (auto [a, b] : c.poset.strict_pairs())
      std::cout << " " << c.poset.name(a) << "<" << c.poset.name(b);
    std::cout << "\n";
    auto rep = connectedness_check(c.poset);
    std::cout << "componentwise 1-connected: " << yn(rep.one_connected)
              << ", kernel dimension: " << rep.kernel_dim << "\n";
    if (rep.cycle_witness) {
      std::cout << "cycle witness:";
      for (i64 v : *rep.cycle_witness) std::cout << " " << v;
      std::cout << "\n";
    }
    std::cout << "RESULT crown_elements=" << c.poset.size()
              << " crown_relations=" << c.poset.strict_pairs().size()
              << " one_connected=" << yn(rep.one_connected)
              << " kernel_dim=" << rep.kernel_dim << "\n";
    return rep.one_connected ? kExitOk : kExitCheckFailed;
  }

  if (what == "flat") {
    auto rep = flatness_check(P);
    for (const auto& f : rep.failures)
      std::cout << "failure: " << (f.direction == CrownMode::ind ? "ind" : "pro")
                << "-crown at " << P.name(f.element)
                << " has kernel dimension " << f.report.kernel_dim << "\n";
    std::cout << "RESULT ind_flat=" << yn(rep.ind_flat) << " pro_flat=" << yn(rep.pro_flat)
              << "\n";
    return rep.flat ? kExitOk : kExitCheckFailed;
  }

  if (what == "quasitree") {
    bool qt = quasitree_check(P);
    std::cout << "RESULT quasitree=" << yn(qt) << "\n";
    return qt ? kExitOk : kExitCheckFailed;
  }

  if (what == "mitchell") {
    auto rep = mitchell_check(P);
    if (rep.witness) {
      std::cout << "witness: suspended " << rep.witness->n << "-crown via condition ("
                << (rep.witness->condition == 1 ? "i" : "ii") << "), image:";
      for (int x : rep.witness->embedding.map) std::cout << " " << P.name(x);
      std::cout << "\n";
    }
    std::cout << "RESULT dimension_le_2=" << yn(rep.dimension_le_2);
    if (rep.witness)
      std::cout << " witness_n=" << rep.witness->n
                << " witness_condition=" << rep.witness->condition;
    std::cout << "\n";
    return rep.dimension_le_2 ? kExitOk : kExitCheckFailed;
  }

  fail(Errc::parse_error, "unknown poset subcommand: " + what);
}

// ---------------------------------------------------------------------------

void print_trace(const std::vector<TraceStep>& trace) {
  for (const auto& t : trace) {
    std::cout << "trace: " << t.action << " at " << t.element;
    if (t.added_free_rank > 0) std::cout << " (+free rank " << t.added_free_rank << ")";
    std::cout << "\n";
  }
}

void emit_diagram(const std::string& out, const Prediagram& X) {
  if (out.empty()) {
    write_diagram(std::cout, X);
  } else {
    std::ofstream f(out);
    require(f.good(), Errc::parse_error, "cannot write " + out);
    write_diagram(f, X);
  }
}

int cmd_lift(const std::string& poset_file, const std::string& gen,
             const std::string& diagram_file, const std::string& target_file,
             const std::string& morphism_file, const std::string& mode, const std::string& out,
             int random_n, std::uint64_t seed) {
  if (random_n > 0) {
    std::mt19937_64 rng(seed);
    Poset shape = testgen::random_ind_flat_poset(rng, random_n);
    auto ring = RingParams::make(3, 2);
    Prediagram X = testgen::random_stably_commutative_prediagram(rng, shape, ring, 2);
    std::cout << "generated stably commutative prediagram over " << shape.size()
              << " elements (seed " << seed << ")\n";
    auto res = lift_diagram(X);
    print_trace(res.trace);
    emit_diagram(out, res.lifted);
    std::cout << "RESULT lift=ok strict=true monic=true stable_iso=true trace_steps="
              << res.trace.size() << "\n";
    return kExitOk;
  }

  Poset shape = load_poset(poset_file, gen);
  Prediagram X = load_diagram(diagram_file, shape);

  if (mode == "diagram") {
    auto res = lift_diagram(X);
    print_trace(res.trace);
    emit_diagram(out, res.lifted);
    std::cout << "RESULT lift=ok strict=true monic=true stable_iso=true trace_steps="
              << res.trace.size() << "\n";
    return kExitOk;
  }

  require(!target_file.empty() && !morphism_file.empty(), Errc::parse_error,
          "this mode needs --target and --morphism");
  Prediagram Y = load_diagram(target_file, shape);
  std::ifstream hin(morphism_file);
  require(hin.good(), Errc::parse_error, "cannot open " + morphism_file);
  auto fhat = parse_hom(hin, X, Y);

  if (mode == "strict-full-test") {
    auto g = strict_lift_of_stable_morphism(X, Y, fhat);
    if (!g) {
      std::cout << "RESULT strict_lift=none\n";
      return kExitCheckFailed;
    }
    if (!out.empty()) {
      std::ofstream f(out);
      require(f.good(), Errc::parse_error, "cannot write " + out);
      write_hom(f, shape, g->components);
    }
    std::cout << "RESULT strict_lift=found\n";
    return kExitOk;
  }

  if (mode == "morphism") {
    auto res = lift_morphism(X, Y, fhat);
    emit_diagram(out, res.replaced);
    std::cout << "RESULT morphism_lift=ok homotopism=true strict_natural=true certificates="
              << res.certificate.size() << "\n";
    return kExitOk;
  }

  fail(Errc::parse_error, "unknown lift mode: " + mode);
}

// ---------------------------------------------------------------------------

int cmd_census(int max_n, int jobs, const std::string& out_dir) {
  auto res = run_census(max_n, jobs);
  std::cout << "size  classes  crowns  1conn  ind-flat  pro-flat  flat  quasitree  mit<=2  "
               "candidates\n";
  for (const auto& st : res.per_size) {
    std::cout << st.n << "  " << st.classes << "  " << st.crowns << "  "
              << st.one_connected_crowns << "  " << st.ind_flat << "  " << st.pro_flat << "  "
              << st.flat << "  " << st.quasitrees << "  " << st.mitchell_dim_le_2 << "  "
              << st.scan_candidates << "\n";
  }
  std::uint64_t qt_violations = 0, reading_split = 0;
  for (const auto& st : res.per_size) {
    qt_violations += st.quasitree_not_flat;
    reading_split += st.mitchell_readings_differ;
  }
  std::cout << "quasitrees that are not flat: " << qt_violations << "\n";
  std::cout << "posets where the 2-crown mediator readings differ: " << reading_split << "\n";
  if (!res.scan_candidates.empty()) {
    std::cout << "scan candidates (ind-flat, Mitchell dimension > 2) -- emitted, not asserted:\n";
    for (std::size_t i = 0; i < res.scan_candidates.size(); ++i) {
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(out_dir + "/candidate_" + std::to_string(i) + ".poset");
        write_poset(f, res.scan_candidates[i]);
      } else {
        write_poset(std::cout, res.scan_candidates[i]);
      }
    }
  }
  std::cout << "RESULT classes=";
  for (std::size_t i = 0; i < res.per_size.size(); ++i)
    std::cout << (i ? "," : "") << res.per_size[i].classes;
  std::cout << " candidates=" << res.scan_candidates.size()
            << " reading_split=" << reading_split << " quasitree_not_flat=" << qt_violations
            << "\n";
  return kExitOk;
}

int cmd_examples(const std::string& tamper) {
  auto results = fixtures::run_examples_suite(tamper);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.pass) std::cout << ": " << r.detail;
    std::cout << "\n";
    all = all && r.pass;
  }
  std::cout << "RESULT fixtures=" << results.size() << " passed="
            << std::count_if(results.begin(), results.end(),
                             [](const auto& r) { return r.pass; })
            << "\n";
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact crown/flatness analysis of finite posets and constructive lifting of "
               "stable diagrams of Z/p^k-modules"};
  app.require_subcommand(1);

  std::string in_file, gen_spec, what = "info", crown_dir = "ind";
  auto* poset = app.add_subcommand("poset", "analyze a finite poset");
  poset->add_option("--in", in_file, "poset file");
  poset->add_option("--gen", gen_spec, "generator: chain:n|powerset:m|product:m,n|sc:n");
  poset->add_option("what", what, "info|crown|flat|quasitree|mitchell")
      ->check(CLI::IsMember({"info", "crown", "flat", "quasitree", "mitchell"}));
  poset->add_option("dir", crown_dir, "crown direction: ind|pro")
      ->check(CLI::IsMember({"ind", "pro"}));

  std::string l_poset, l_gen, l_diagram, l_target, l_morphism, l_mode = "diagram", l_out;
  int l_random = 0;
  std::uint64_t l_seed = 1;
  auto* lift = app.add_subcommand("lift", "lift stable diagrams and morphisms");
  lift->add_option("--poset", l_poset, "shape poset file");
  lift->add_option("--gen", l_gen, "shape generator spec");
  lift->add_option("--diagram", l_diagram, "prediagram file");
  lift->add_option("--target", l_target, "target diagram file (morphism modes)");
  lift->add_option("--morphism", l_morphism, "morphism representative file");
  lift->add_option("--mode", l_mode, "diagram|morphism|strict-full-test")
      ->check(CLI::IsMember({"diagram", "morphism", "strict-full-test"}));
  lift->add_option("--out", l_out, "output file for the lifted diagram/morphism");
  lift->add_option("--random", l_random, "generate and lift a random instance (max elements)");
  lift->add_option("--seed", l_seed, "random seed for --random");

  int c_max = 5, c_jobs = 1;
  std::string c_out;
  auto* census = app.add_subcommand("census", "classify all posets up to isomorphism");
  census->add_option("--max-n", c_max, "largest size (<= 7)")->check(CLI::Range(1, 7));
  census->add_option("--jobs", c_jobs, "worker threads")->check(CLI::Range(1, 64));
  census->add_option("--out", c_out, "directory for emitted candidate posets");

  std::string tamper;
  auto* examples = app.add_subcommand("examples", "run the worked-example regression suite");
  examples->add_option("--tamper", tamper, "mutate the named fixture (negative control)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (poset->parsed()) return cmd_poset(in_file, gen_spec, what, crown_dir);
    if (lift->parsed())
      return cmd_lift(l_poset, l_gen, l_diagram, l_target, l_morphism, l_mode, l_out, l_random,
                      l_seed);
    if (census->parsed()) return cmd_census(c_max, c_jobs, c_out);
    if (examples->parsed()) return cmd_examples(tamper);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitInputError;
}
