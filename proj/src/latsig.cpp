#include "latnet/latsig.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "latnet/errors.hpp"

namespace latnet {

namespace {

constexpr int kMaxBasisSize = 512;  // the theta solve is cubic

void check_signal(const FiniteLattice& L, const std::vector<double>& f, const char* what) {
  if (static_cast<int>(f.size()) != L.m)
    throw ShapeMismatch(std::string(what) + " has " + std::to_string(f.size()) +
                        " entries but the lattice has " + std::to_string(L.m) + " elements");
}

void check_element(const FiniteLattice& L, int x) {
  if (x < 0 || x >= L.m) throw ShapeMismatch("element index out of range");
}

}  // namespace

Signal shift(const FiniteLattice& L, int x, const Signal& f, ShiftFlavor flavor) {
  check_element(L, x);
  check_signal(L, f, "signal");
  Signal out(L.m);
  for (int y = 0; y < L.m; ++y)
    out[y] = f[flavor == ShiftFlavor::meet ? L.meet_of(x, y) : L.join_of(x, y)];
  return out;
}

Signal convolve(const FiniteLattice& L, const Signal& h, const Signal& f, ShiftFlavor flavor) {
  check_signal(L, h, "filter");
  check_signal(L, f, "signal");
  Signal out(L.m, 0.0);
  for (int y = 0; y < L.m; ++y) {
    double acc = 0.0;
    for (int x = 0; x < L.m; ++x)
      acc += h[x] * f[flavor == ShiftFlavor::meet ? L.meet_of(x, y) : L.join_of(x, y)];
    out[y] = acc;
  }
  return out;
}

Signal one_hot(const FiniteLattice& L, int x) {
  check_element(L, x);
  Signal f(L.m, 0.0);
  f[x] = 1.0;
  return f;
}

Signal upset_indicator(const FiniteLattice& L, int y) {
  check_element(L, y);
  Signal f(L.m, 0.0);
  for (int x = 0; x < L.m; ++x)
    if (L.le(y, x)) f[x] = 1.0;
  return f;
}

Signal downset_indicator(const FiniteLattice& L, int y) {
  check_element(L, y);
  Signal f(L.m, 0.0);
  for (int x = 0; x < L.m; ++x)
    if (L.le(x, y)) f[x] = 1.0;
  return f;
}

BasisPair eigenbasis(const FiniteLattice& L) {
  const int m = L.m;
  if (m > kMaxBasisSize)
    throw TooLarge("eigenbasis limited to " + std::to_string(kMaxBasisSize) + " elements, got " +
                   std::to_string(m));
  BasisPair B;
  B.m = m;
  B.order = linear_extension(L);
  B.b_meet.assign(static_cast<size_t>(m) * m, 0);
  B.b_join.assign(static_cast<size_t>(m) * m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const std::uint8_t v = L.le(B.order[i], B.order[j]) ? 1 : 0;
      B.b_meet[static_cast<size_t>(i) * m + j] = v;
      B.b_join[static_cast<size_t>(j) * m + i] = v;
    }

  // Solve theta * b_meet = b_join one theta-row at a time:
  // (theta * b_meet)[r][c] = sum_k theta[r][k] * b_meet[k][c], and
  // b_meet[k][c] vanishes unless position k <= position c (upper
  // unitriangular in extension order), so scanning c from the left
  // determines theta[r][c] once theta[r][k] is known for all k < c.
  // The diagonal is 1, so everything stays in integers.
  B.theta.assign(static_cast<size_t>(m) * m, 0);
  for (int r = 0; r < m; ++r) {
    long long* tr = &B.theta[static_cast<size_t>(r) * m];
    for (int c = 0; c < m; ++c) {
      long long acc = B.b_join[static_cast<size_t>(r) * m + c];
      for (int k = 0; k < c; ++k)
        if (B.b_meet[static_cast<size_t>(k) * m + c]) acc -= tr[k];
      tr[c] = acc;  // diagonal of b_meet is 1
    }
  }
  return B;
}

std::vector<long long> apply_theta(const BasisPair& B, const std::vector<long long>& f) {
  if (static_cast<int>(f.size()) != B.m) throw ShapeMismatch("coordinate vector length mismatch");
  std::vector<long long> out(B.m, 0);
  for (int i = 0; i < B.m; ++i)
    for (int j = 0; j < B.m; ++j) out[i] += B.theta[static_cast<size_t>(i) * B.m + j] * f[j];
  return out;
}

std::vector<double> apply_theta(const BasisPair& B, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != B.m) throw ShapeMismatch("coordinate vector length mismatch");
  std::vector<double> out(B.m, 0.0);
  for (int i = 0; i < B.m; ++i)
    for (int j = 0; j < B.m; ++j)
      out[i] += static_cast<double>(B.theta[static_cast<size_t>(i) * B.m + j]) * f[j];
  return out;
}

bool theta_intertwines(const FiniteLattice& L) {
  const BasisPair B = eigenbasis(L);
  const int m = B.m;
  std::vector<int> pos(m);  // element index -> extension position
  for (int p = 0; p < m; ++p) pos[B.order[p]] = p;

  // Shift matrices are 0/1 with one entry per row: acting on coordinate
  // vectors, (T_a f)[i] = f[tgt[i]] with tgt[i] the position of
  // order[i] ^ a (meet) or order[i] v a (join). Compare
  // theta * T_meet == T_join * theta entrywise, bailing at the first
  // difference.
  std::vector<int> tgt_meet(m), tgt_join(m);
  for (int ap = 0; ap < m; ++ap) {
    const int a = B.order[ap];
    for (int i = 0; i < m; ++i) {
      tgt_meet[i] = pos[L.meet_of(B.order[i], a)];
      tgt_join[i] = pos[L.join_of(B.order[i], a)];
    }
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) {
        // (theta * T_meet)[i][k] = sum over rows j of T_meet hitting column
        // k, i.e. j with tgt_meet[j] == k, of theta[i][j].
        long long lhs = 0;
        for (int j = 0; j < m; ++j)
          if (tgt_meet[j] == k) lhs += B.theta[static_cast<size_t>(i) * m + j];
        const long long rhs = B.theta[static_cast<size_t>(tgt_join[i]) * m + k];
        if (lhs != rhs) return false;
      }
  }
  return true;
}

std::vector<double> residuated_convolve(const FiniteLattice& K, const ScalarResiduated& R,
                                        const std::vector<double>& h,
                                        const std::vector<double>& f) {
  check_signal(K, h, "filter");
  check_signal(K, f, "signal");
  const int m = K.m;
  std::vector<double> H(static_cast<size_t>(m) * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) H[static_cast<size_t>(x) * m + y] = f[K.meet_of(x, y)];
  return integral_transform(R, H, h);
}

std::vector<double> residuated_convolve_adjoint(const FiniteLattice& K,
                                                const ScalarResiduated& R,
                                                const std::vector<double>& g,
                                                const std::vector<double>& f) {
  check_signal(K, g, "signal");
  check_signal(K, f, "signal");
  const int m = K.m;
  std::vector<double> H(static_cast<size_t>(m) * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) H[static_cast<size_t>(x) * m + y] = f[K.meet_of(x, y)];
  return adjoint_transform(R, H, g);
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV record into fields, honoring double-quoted fields with
// doubled quotes inside.
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_value(const std::string& s) {
  if (s == "inf" || s == "+inf") return xr::pos_inf;
  if (s == "-inf") return xr::neg_inf;
  size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw ParseError("bad numeric value '" + s + "'");
  return v;
}

}  // namespace

void write_signal_csv(std::ostream& out, const FiniteLattice& L, const Signal& f) {
  check_signal(L, f, "signal");
  out << "element_label,value\n";
  for (int x = 0; x < L.m; ++x) {
    out << csv_quote(L.label(x)) << ",";
    if (f[x] == xr::pos_inf)
      out << "inf";
    else if (f[x] == xr::neg_inf)
      out << "-inf";
    else
      out << f[x];
    out << "\n";
  }
}

Signal read_signal_csv(std::istream& in, const FiniteLattice& L) {
  std::map<std::string, int> by_label;
  for (int x = 0; x < L.m; ++x) by_label[L.label(x)] = x;

  Signal f(L.m, 0.0);
  std::vector<bool> seen(L.m, false);
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = csv_fields(line);
    if (first) {
      first = false;
      if (fields.size() == 2 && fields[0] == "element_label" && fields[1] == "value") continue;
    }
    if (fields.size() != 2)
      throw ParseError("line " + std::to_string(lineno) + ": expected label,value");
    auto it = by_label.find(fields[0]);
    if (it == by_label.end())
      throw ParseError("line " + std::to_string(lineno) + ": unknown element '" + fields[0] + "'");
    if (seen[it->second])
      throw ParseError("line " + std::to_string(lineno) + ": duplicate element '" + fields[0] + "'");
    seen[it->second] = true;
    try {
      f[it->second] = parse_value(fields[1]);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad numeric value '" + fields[1] + "'");
    }
  }
  for (int x = 0; x < L.m; ++x)
    if (!seen[x]) throw ParseError("no value for element '" + L.label(x) + "'");
  return f;
}

}  // namespace latnet
