#include "qmonoidal/diagram.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qmon {

Word level_word(int x) { return Word(static_cast<size_t>(std::max(0, x)), 'a'); }

Word conjugate_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (char& ch : out) ch = ch == 'a' ? 'b' : 'a';
  return out;
}

bool is_word(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char ch) { return ch == 'a' || ch == 'b'; });
}

namespace {

bool arc_allowed(const Diagram& d, int p, int q, const Coloring& col) {
  if (p > q) std::swap(p, q);
  const bool tp = d.is_top(p), tq = d.is_top(q);
  if (tp && tq) return col.can_pair(d.top[p], d.top[q]);
  if (!tp && !tq) return col.can_pair(d.bottom[p - d.n_top()], d.bottom[q - d.n_top()]);
  return d.letter(p) == d.letter(q);
}

}  // namespace

std::vector<Diagram> enumerate_diagrams(const Word& bottom, const Word& top, const Coloring& col) {
  std::vector<Diagram> out;
  Diagram d{bottom, top, std::vector<int>(bottom.size() + top.size(), -1)};
  const int np = d.n_points();
  if (np % 2 != 0) return out;
  // Boundary circle order.
  std::vector<int> ord;
  for (int i = 0; i < d.n_top(); ++i) ord.push_back(i);
  for (int j = d.n_bottom() - 1; j >= 0; --j) ord.push_back(d.n_top() + j);

  // Intervals ord[lo, hi) still to be paired are kept on a stack; the first
  // point of the top interval is joined to every admissible partner in turn.
  std::vector<std::pair<int, int>> pending;
  std::function<void()> rec = [&]() {
    if (pending.empty()) {
      out.push_back(d);
      return;
    }
    auto [lo, hi] = pending.back();
    pending.pop_back();
    if (lo >= hi) {
      rec();
      pending.emplace_back(lo, hi);
      return;
    }
    for (int k = lo + 1; k < hi; k += 2) {
      const int p = ord[lo], q = ord[k];
      if (!arc_allowed(d, p, q, col)) continue;
      d.partner[p] = q;
      d.partner[q] = p;
      pending.emplace_back(k + 1, hi);
      pending.emplace_back(lo + 1, k);
      rec();
      pending.pop_back();
      pending.pop_back();
      d.partner[p] = d.partner[q] = -1;
    }
    pending.emplace_back(lo, hi);
  };
  pending.emplace_back(0, np);
  rec();
  return out;
}

Diagram identity_diagram(const Word& w) {
  const int L = static_cast<int>(w.size());
  Diagram d{w, w, std::vector<int>(2 * L)};
  for (int i = 0; i < L; ++i) {
    d.partner[i] = L + i;
    d.partner[L + i] = i;
  }
  return d;
}

Diagram insertion_diagram(const Word& u, char x, char y, const Word& w) {
  const Word top = u + x + y + w;
  const int nu = static_cast<int>(u.size()), nt = static_cast<int>(top.size());
  Diagram d{u + w, top, std::vector<int>(top.size() + u.size() + w.size())};
  for (int i = 0; i < static_cast<int>(u.size() + w.size()); ++i) {
    const int t = i < nu ? i : i + 2;
    d.partner[t] = nt + i;
    d.partner[nt + i] = t;
  }
  d.partner[nu] = nu + 1;
  d.partner[nu + 1] = nu;
  return d;
}

Diagram nested_cup(const Word& w, const Word& wbar) {
  const Word top = w + wbar;
  const int L = static_cast<int>(top.size());
  Diagram d{"", top, std::vector<int>(top.size())};
  for (int i = 0; i < L; ++i) d.partner[i] = L - 1 - i;
  return d;
}

Diagram tensor(const Diagram& a, const Diagram& b) {
  Diagram d{a.bottom + b.bottom, a.top + b.top, std::vector<int>(a.n_points() + b.n_points())};
  const int T = a.n_top() + b.n_top();
  auto map_a = [&](int p) { return a.is_top(p) ? p : T + (p - a.n_top()); };
  auto map_b = [&](int p) {
    return b.is_top(p) ? a.n_top() + p : T + a.n_bottom() + (p - b.n_top());
  };
  for (int p = 0; p < a.n_points(); ++p) d.partner[map_a(p)] = map_a(a.partner[p]);
  for (int p = 0; p < b.n_points(); ++p) d.partner[map_b(p)] = map_b(b.partner[p]);
  return d;
}

Diagram adjoint(const Diagram& d) {
  Diagram out{d.top, d.bottom, std::vector<int>(d.n_points())};
  const int nt = out.n_top();
  auto map = [&](int p) { return d.is_top(p) ? nt + p : p - d.n_top(); };
  for (int p = 0; p < d.n_points(); ++p) out.partner[map(p)] = map(d.partner[p]);
  return out;
}

Composite compose(const Diagram& a, const Diagram& b) {
  if (a.bottom != b.top) throw Error(ErrorKind::DimensionMismatch, "compose: words do not match");
  const int M = a.n_bottom();
  const int ant = a.n_top(), bnt = b.n_top();
  Composite out;
  out.diagram = Diagram{b.bottom, a.top, std::vector<int>(a.n_top() + b.n_bottom(), -1)};
  std::vector<char> visited(M, 0);

  // Follows the strand leaving `p` on side 0 (a) or 1 (b) until it reaches
  // an outer point; returns that point's id in the composite.
  auto walk = [&](int side, int p, int& caps, int& cups) {
    for (;;) {
      if (side == 0) {
        const int q = a.partner[p];
        if (q < ant) return q;
        if (p >= ant) ++caps;
        const int k = q - ant;
        visited[k] = 1;
        side = 1;
        p = k;
      } else {
        const int q = b.partner[p];
        if (q >= bnt) return ant + (q - bnt);
        if (p < bnt) ++cups;
        visited[q] = 1;
        side = 0;
        p = ant + q;
      }
    }
  };

  for (int c = 0; c < out.diagram.n_points(); ++c) {
    if (out.diagram.partner[c] >= 0) continue;
    int caps = 0, cups = 0;
    const int end = c < ant ? walk(0, c, caps, cups) : walk(1, bnt + (c - ant), caps, cups);
    out.diagram.partner[c] = end;
    out.diagram.partner[end] = c;
    out.power += std::min(caps, cups);
  }
  for (int k = 0; k < M; ++k) {
    if (visited[k]) continue;
    int caps = 0;
    int m = k;
    do {
      visited[m] = 1;
      const int l = a.partner[ant + m] - ant;  // cap m–l
      ++caps;
      visited[l] = 1;
      m = b.partner[l];  // cup l–m
    } while (m != k);
    out.power += caps - 1;
  }
  return out;
}

std::string to_string(const Diagram& d) {
  std::ostringstream os;
  os << '[' << d.bottom << "->" << d.top << ':';
  for (int p = 0; p < d.n_points(); ++p)
    if (p < d.partner[p]) os << ' ' << p << '-' << d.partner[p];
  os << ']';
  return os.str();
}

}  // namespace qmon
