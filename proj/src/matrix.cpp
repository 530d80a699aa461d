#include "trackpoly/matrix.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace trackpoly {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j)))
        throw InvariantError("expected an integer matrix, found entry " + to_string(m(i, j)));
      r(i, j) = numerator_of(m(i, j));
    }
  return r;
}

RatMatrix rref(const RatMatrix& m, std::vector<std::size_t>* pivots) {
  RatMatrix a = m;
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, col) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(sel, j), a(row, j));
    Rational p = a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) /= p;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  if (pivots) *pivots = std::move(piv);
  return a;
}

std::size_t rank(const RatMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

namespace {

std::vector<Integer> primitive(const std::vector<Rational>& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, denominator_of(x));
  std::vector<Integer> out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = numerator_of(v[i] * den);
    g = gcd(g, out[i]);
  }
  if (g == 0) return out;
  bool flip = false;
  for (const auto& x : out)
    if (x != 0) {
      flip = x < 0;
      break;
    }
  for (auto& x : out) {
    x /= g;
    if (flip) x = -x;
  }
  return out;
}

}  // namespace

std::vector<std::vector<Integer>> kernel_basis(const RatMatrix& m) {
  std::vector<std::size_t> piv;
  RatMatrix r = rref(m, &piv);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<std::vector<Integer>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -r(k, free);
    basis.push_back(primitive(v));
  }
  return basis;
}

IntMatrix from_columns(const std::vector<std::vector<Integer>>& columns, std::size_t rows) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

RatMatrix inverse(const RatMatrix& m) {
  if (!m.square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix aug = block(m, RatMatrix::identity(n), RatMatrix(0, n), RatMatrix(0, n));
  std::vector<std::size_t> piv;
  RatMatrix r = rref(aug, &piv);
  if (piv.size() < n || piv[n - 1] != n - 1) throw InvariantError("matrix is singular");
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  return inv;
}

RatMatrix solve_in_span(const RatMatrix& basis, const RatMatrix& target) {
  if (basis.rows() != target.rows()) throw std::invalid_argument("solve_in_span: row mismatch");
  const std::size_t k = basis.cols();
  RatMatrix aug = block(basis, target, RatMatrix(0, k), RatMatrix(0, target.cols()));
  std::vector<std::size_t> piv;
  RatMatrix r = rref(aug, &piv);
  if (piv.size() != k || (k > 0 && piv[k - 1] != k - 1)) {
    // either basis columns are dependent or some target column leaves the span
    for (std::size_t i = 0; i < piv.size(); ++i)
      if (piv[i] >= k) throw InvariantError("target is not in the column span");
    throw InvariantError("basis columns are linearly dependent");
  }
  RatMatrix x(k, target.cols());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < target.cols(); ++j) x(i, j) = r(i, k + j);
  if (!(basis * x == target)) throw InvariantError("target is not in the column span");
  return x;
}

Rational determinant(const RatMatrix& m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  RatMatrix a = m;
  Rational det = 1;
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

Integer determinant(const IntMatrix& m) {
  Rational d = determinant(to_rational(m));
  return numerator_of(d);
}

namespace {

template <class T>
std::string render(const Matrix<T>& m) {
  std::vector<std::string> cells(m.rows() * m.cols());
  std::size_t width = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      cells[i * m.cols() + j] = to_string(m(i, j));
      width = std::max(width, cells[i * m.cols() + j].size());
    }
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& c = cells[i * m.cols() + j];
      os << (j ? " " : "") << std::string(width - c.size(), ' ') << c;
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace

std::string to_string(const IntMatrix& m) { return render(m); }
std::string to_string(const RatMatrix& m) { return render(m); }

IntMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) lines.emplace_back(no, std::move(toks));
  }
  if (lines.empty()) throw ParseError(1, "missing 'rows cols' header");
  auto integer = [](int no, const std::string& t) {
    try {
      if (t.empty() || t.find_first_not_of("+-0123456789") != std::string::npos ||
          t.find_first_of("+-", 1) != std::string::npos)
        throw std::invalid_argument(t);
      Integer v(t[0] == '+' ? t.substr(1) : t);
      return v;
    } catch (const std::exception&) {
      throw ParseError(no, "'" + t + "' is not an integer");
    }
  };
  const auto& [hno, head] = lines.front();
  if (head.size() != 2) throw ParseError(hno, "header must be 'rows cols'");
  Integer r = integer(hno, head[0]), c = integer(hno, head[1]);
  if (r < 0 || c < 0 || r > 100000 || c > 100000) throw ParseError(hno, "bad matrix dimensions");
  const std::size_t rows = static_cast<std::size_t>(r), cols = static_cast<std::size_t>(c);
  if (lines.size() - 1 != rows)
    throw ParseError(hno, "expected " + std::to_string(rows) + " rows, found " + std::to_string(lines.size() - 1));
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& [no, toks] = lines[i + 1];
    if (toks.size() != cols)
      throw ParseError(no, "expected " + std::to_string(cols) + " entries, found " + std::to_string(toks.size()));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = integer(no, toks[j]);
  }
  return m;
}

IntMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path);
  }
}

}  // namespace trackpoly
