#pragma once

#include "qmonoidal/core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qmon {

/// Labels and tensor words are strings over {a, b}; 'a' is the fundamental
/// object and 'b' its conjugate. The orthogonal variant only uses 'a'.
using Word = std::string;

Word level_word(int x);
Word conjugate_word(const Word& w);
bool is_word(const std::string& s);

/// Which letter pairs may be joined by a cup or cap.
struct Coloring {
  bool oriented = false;  // false: A_o rules, true: A_u rules

  bool can_pair(char x, char y) const { return !oriented || x != y; }
};

/// A non-crossing pairing diagram from the word `bottom` (source) to the word
/// `top` (target). Points 0..|top|-1 are the top points, |top|..|top|+|bottom|-1
/// the bottom points. Arcs between two top points are cups, between two
/// bottom points caps, and the rest are through strings.
struct Diagram {
  Word bottom, top;
  std::vector<int> partner;

  int n_top() const { return static_cast<int>(top.size()); }
  int n_bottom() const { return static_cast<int>(bottom.size()); }
  int n_points() const { return n_top() + n_bottom(); }
  bool is_top(int p) const { return p < n_top(); }
  char letter(int p) const { return is_top(p) ? top[p] : bottom[p - n_top()]; }

  bool operator==(const Diagram& o) const {
    return bottom == o.bottom && top == o.top && partner == o.partner;
  }
};

/// All non-crossing diagrams bottom → top allowed by `col`, in a fixed
/// order: recursion on the boundary circle read as top left to right, then
/// bottom right to left, pairing the first free point with each candidate in turn.
std::vector<Diagram> enumerate_diagrams(const Word& bottom, const Word& top, const Coloring& col);

/// Identity diagram on w.
Diagram identity_diagram(const Word& w);

/// The cup 1_u ⊗ cup ⊗ 1_w : u w → u x y w.
Diagram insertion_diagram(const Word& u, char x, char y, const Word& w);

/// Nested arcs from ε to w w̄, where w̄ is the dual word (w itself for A_o,
/// conjugate_word(w) for A_u).
Diagram nested_cup(const Word& w, const Word& wbar);

/// Juxtaposition a ⊗ b.
Diagram tensor(const Diagram& a, const Diagram& b);

/// Mirror image (matrix adjoint).
Diagram adjoint(const Diagram& d);

/// Result of gluing: the composite equals sigma^power times `diagram`, where
/// sigma is the realization's snake scalar.
struct Composite {
  Diagram diagram;
  int power = 0;
};

/// a ∘ b, requires a.bottom == b.top.
Composite compose(const Diagram& a, const Diagram& b);

/// A morphism as a linear combination of diagrams with common source/target.
struct DiagramCombo {
  Word bottom, top;
  std::vector<std::pair<cplx, Diagram>> terms;
};

std::string to_string(const Diagram& d);

}  // namespace qmon
