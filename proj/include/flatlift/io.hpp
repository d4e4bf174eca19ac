#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "flatlift/diagram.hpp"
#include "flatlift/flatness.hpp"

namespace flatlift {

namespace detail {

inline std::vector<std::string> content_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream probe(line);
    std::string tok;
    if (probe >> tok) out.push_back(line);
  }
  return out;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline i64 parse_int(const std::string& tok) {
  try {
    std::size_t pos = 0;
    i64 v = std::stoll(tok, &pos);
    require(pos == tok.size(), Errc::parse_error, "not an integer: " + tok);
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(Errc::parse_error, "not an integer: " + tok);
  }
}

}  // namespace detail

// Poset file: first content line lists the element names, remaining lines are
// cover relations "a < b". '#' starts a comment.
inline Poset parse_poset(std::istream& in) {
  auto lines = detail::content_lines(in);
  require(!lines.empty(), Errc::parse_error, "poset file has no content");
  std::vector<std::string> names = detail::tokens(lines[0]);
  std::vector<std::pair<std::string, std::string>> covers;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto t = detail::tokens(lines[i]);
    require(t.size() == 3 && t[1] == "<", Errc::parse_error,
            "expected 'a < b', got: " + lines[i]);
    covers.emplace_back(t[0], t[2]);
  }
  try {
    return Poset::from_cover_relations(names, covers);
  } catch (const Error& e) {
    fail(Errc::parse_error, std::string("invalid poset: ") + e.what());
  }
}

// Canonical writer: covers sorted source-major in input order.
inline void write_poset(std::ostream& out, const Poset& P) {
  for (int i = 0; i < P.size(); ++i) out << (i ? " " : "") << P.name(i);
  out << "\n";
  for (auto [a, b] : P.cover_pairs()) out << P.name(a) << " < " << P.name(b) << "\n";
}

namespace detail {

inline Matrix parse_matrix(const std::vector<std::string>& lines, std::size_t& pos, int rows,
                           int cols) {
  Matrix m(rows, cols);
  if (cols == 0) return m;  // zero-width rows carry no data lines
  for (int r = 0; r < rows; ++r) {
    require(pos < lines.size(), Errc::parse_error, "matrix rows missing");
    auto t = tokens(lines[pos++]);
    require(static_cast<int>(t.size()) == cols, Errc::parse_error, "matrix row width mismatch");
    for (int c = 0; c < cols; ++c) m.at(r, c) = parse_int(t[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  if (m.cols == 0) return;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) out << (c ? " " : "") << m.at(r, c);
    out << "\n";
  }
}

inline RingParams parse_ring_header(const std::vector<std::string>& lines, std::size_t& pos) {
  require(pos < lines.size(), Errc::parse_error, "missing ring header");
  auto t = tokens(lines[pos]);
  require(t.size() == 3 && t[0] == "ring", Errc::parse_error, "expected 'ring p k'");
  ++pos;
  try {
    return RingParams::make(parse_int(t[1]), static_cast<int>(parse_int(t[2])));
  } catch (const Error& e) {
    fail(Errc::parse_error, std::string("invalid ring: ") + e.what());
  }
}

}  // namespace detail

// Diagram file: 'ring p k', then 'obj NAME : e1 e2 ...' for every element and
// 'map A B : r x c' plus r matrix rows for every strict relation.
inline Prediagram parse_diagram(std::istream& in, const Poset& shape) {
  auto lines = detail::content_lines(in);
  std::size_t pos = 0;
  Prediagram X;
  X.shape = shape;
  X.ring_params = detail::parse_ring_header(lines, pos);
  X.objects.assign(static_cast<std::size_t>(shape.size()), zero_object(X.ring_params));
  std::vector<std::uint8_t> have_obj(static_cast<std::size_t>(shape.size()), 0);
  std::vector<std::vector<std::uint8_t>> have_map(
      static_cast<std::size_t>(shape.size()),
      std::vector<std::uint8_t>(static_cast<std::size_t>(shape.size()), 0));

  while (pos < lines.size()) {
    auto t = detail::tokens(lines[pos]);
    if (t[0] == "obj") {
      require(t.size() >= 3 && t[2] == ":", Errc::parse_error, "expected 'obj NAME : e...'");
      int a;
      try {
        a = shape.index_of(t[1]);
      } catch (const Error& e) {
        fail(Errc::parse_error, e.what());
      }
      std::vector<int> exps;
      for (std::size_t i = 3; i < t.size(); ++i)
        exps.push_back(static_cast<int>(detail::parse_int(t[i])));
      try {
        X.objects[static_cast<std::size_t>(a)] = make_object(X.ring_params, std::move(exps));
      } catch (const Error& e) {
        fail(Errc::parse_error, std::string("invalid object: ") + e.what());
      }
      have_obj[static_cast<std::size_t>(a)] = 1;
      ++pos;
    } else if (t[0] == "map") {
      require(t.size() == 7 && t[3] == ":" && t[5] == "x", Errc::parse_error,
              "expected 'map A B : r x c'");
      int a, b;
      try {
        a = shape.index_of(t[1]);
        b = shape.index_of(t[2]);
      } catch (const Error& e) {
        fail(Errc::parse_error, e.what());
      }
      require(shape.lt(a, b), Errc::parse_error,
              "map between unrelated elements: " + t[1] + " " + t[2]);
      require(have_obj[static_cast<std::size_t>(a)] && have_obj[static_cast<std::size_t>(b)],
              Errc::parse_error, "map precedes its objects");
      int rows = static_cast<int>(detail::parse_int(t[4]));
      int cols = static_cast<int>(detail::parse_int(t[6]));
      ++pos;
      Matrix m = detail::parse_matrix(lines, pos, rows, cols);
      try {
        X.set_arrow(a, b, ModMorphism(X.object(a), X.object(b), std::move(m)));
      } catch (const Error& e) {
        fail(Errc::parse_error, std::string("invalid map: ") + e.what());
      }
      have_map[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    } else {
      fail(Errc::parse_error, "unexpected line: " + lines[pos]);
    }
  }
  for (int a = 0; a < shape.size(); ++a)
    require(have_obj[static_cast<std::size_t>(a)], Errc::parse_error,
            "missing object for " + shape.name(a));
  for (auto [a, b] : shape.strict_pairs())
    require(have_map[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)],
            Errc::parse_error, "missing map " + shape.name(a) + " -> " + shape.name(b));
  return X;
}

inline void write_diagram(std::ostream& out, const Prediagram& X) {
  out << "ring " << X.ring_params.p << " " << X.ring_params.k << "\n";
  for (int a = 0; a < X.shape.size(); ++a) {
    out << "obj " << X.shape.name(a) << " :";
    for (int e : X.object(a).exponents) out << " " << e;
    out << "\n";
  }
  for (auto [a, b] : X.shape.strict_pairs()) {
    const Matrix& m = X.arrow(a, b).matrix();
    out << "map " << X.shape.name(a) << " " << X.shape.name(b) << " : " << m.rows << " x "
        << m.cols << "\n";
    detail::write_matrix(out, m);
  }
}

// Morphism file: 'ring p k', then 'hom NAME : r x c' plus matrix rows for
// every element, typed source object -> target object.
inline std::vector<ModMorphism> parse_hom(std::istream& in, const Prediagram& X,
                                          const Prediagram& Y) {
  require(X.shape == Y.shape, Errc::shape_mismatch, "morphism between different shapes");
  auto lines = detail::content_lines(in);
  std::size_t pos = 0;
  RingParams ring = detail::parse_ring_header(lines, pos);
  require(ring == X.ring_params, Errc::parse_error, "morphism ring differs from the diagrams");
  std::vector<std::optional<ModMorphism>> comp(static_cast<std::size_t>(X.shape.size()));
  while (pos < lines.size()) {
    auto t = detail::tokens(lines[pos]);
    require(t.size() == 6 && t[0] == "hom" && t[2] == ":" && t[4] == "x", Errc::parse_error,
            "expected 'hom NAME : r x c'");
    int a;
    try {
      a = X.shape.index_of(t[1]);
    } catch (const Error& e) {
      fail(Errc::parse_error, e.what());
    }
    int rows = static_cast<int>(detail::parse_int(t[3]));
    int cols = static_cast<int>(detail::parse_int(t[5]));
    ++pos;
    Matrix m = detail::parse_matrix(lines, pos, rows, cols);
    try {
      comp[static_cast<std::size_t>(a)] = ModMorphism(X.object(a), Y.object(a), std::move(m));
    } catch (const Error& e) {
      fail(Errc::parse_error, std::string("invalid component: ") + e.what());
    }
  }
  std::vector<ModMorphism> out;
  for (int a = 0; a < X.shape.size(); ++a) {
    require(comp[static_cast<std::size_t>(a)].has_value(), Errc::parse_error,
            "missing component at " + X.shape.name(a));
    out.push_back(std::move(*comp[static_cast<std::size_t>(a)]));
  }
  return out;
}

inline void write_hom(std::ostream& out, const Poset& shape,
                      const std::vector<ModMorphism>& components) {
  require(!components.empty(), Errc::bad_parameter, "empty morphism");
  out << "ring " << components[0].ring().p << " " << components[0].ring().k << "\n";
  for (int a = 0; a < shape.size(); ++a) {
    const Matrix& m = components[static_cast<std::size_t>(a)].matrix();
    out << "hom " << shape.name(a) << " : " << m.rows << " x " << m.cols << "\n";
    detail::write_matrix(out, m);
  }
}

// Generator specs for the CLI: chain:n, powerset:m, product:m,n (a product of
// two chains), sc:n (the suspended n-crown).
inline Poset generate_poset(const std::string& spec) {
  auto colon = spec.find(':');
  require(colon != std::string::npos, Errc::parse_error, "generator spec needs 'kind:args'");
  std::string kind = spec.substr(0, colon);
  std::string args = spec.substr(colon + 1);
  if (kind == "chain") return chain(static_cast<int>(detail::parse_int(args)));
  if (kind == "powerset") return powerset(static_cast<int>(detail::parse_int(args)));
  if (kind == "sc") return suspended_crown(static_cast<int>(detail::parse_int(args)));
  if (kind == "product") {
    auto comma = args.find(',');
    require(comma != std::string::npos, Errc::parse_error, "product needs 'product:m,n'");
    int m = static_cast<int>(detail::parse_int(args.substr(0, comma)));
    int n = static_cast<int>(detail::parse_int(args.substr(comma + 1)));
    return product(chain(m), chain(n));
  }
  fail(Errc::parse_error, "unknown generator kind: " + kind);
}

}  // namespace flatlift
