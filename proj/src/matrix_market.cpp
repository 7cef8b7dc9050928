#include "symspace/matrix_market.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace symspace::mm {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(ErrorCode::ParseError, "Matrix Market: " + msg);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Header {
  bool complex = false;
  Index rows = 0;
  Index cols = 0;
};

Header read_header(std::istream& in, std::vector<double>& values) {
  std::string line;
  if (!std::getline(in, line)) parse_fail("empty input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") parse_fail("missing %%MatrixMarket banner");
  if (lower(object) != "matrix") parse_fail("object must be 'matrix'");
  if (lower(format) != "array") parse_fail("only the dense 'array' format is supported");
  if (lower(symmetry) != "general") parse_fail("only 'general' symmetry is supported");
  Header h;
  const std::string f = lower(field);
  if (f == "complex")
    h.complex = true;
  else if (f != "real" && f != "double")
    parse_fail("field must be real or complex, got '" + field + "'");

  bool have_size = false;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream fields(line);
    if (!have_size) {
      long long r = -1, c = -1;
      if (!(fields >> r >> c) || r <= 0 || c <= 0) parse_fail("bad size line '" + line + "'");
      std::string extra;
      if (fields >> extra) parse_fail("unexpected token on size line");
      h.rows = r;
      h.cols = c;
      have_size = true;
      continue;
    }
    std::string token;
    while (fields >> token) {
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0' || (errno == ERANGE && std::abs(v) > 1.0))
        parse_fail("bad numeric token '" + token + "'");
      values.push_back(v);
    }
  }
  if (!have_size) parse_fail("missing size line");
  const std::size_t expected = static_cast<std::size_t>(h.rows * h.cols) * (h.complex ? 2 : 1);
  if (values.size() != expected) {
    std::ostringstream os;
    os << "dimension mismatch: header says " << h.rows << "x" << h.cols << " (" << expected
       << " values), found " << values.size();
    parse_fail(os.str());
  }
  return h;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return out;
}

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

RealMatrix read_real(std::istream& in) {
  std::vector<double> values;
  const Header h = read_header(in, values);
  if (h.complex) parse_fail("expected a real array, found complex");
  RealMatrix m(h.rows, h.cols);
  std::size_t k = 0;
  for (Index j = 0; j < h.cols; ++j)
    for (Index i = 0; i < h.rows; ++i) m(i, j) = values[k++];
  return m;
}

ComplexMatrix read_complex(std::istream& in) {
  std::vector<double> values;
  const Header h = read_header(in, values);
  ComplexMatrix m(h.rows, h.cols);
  std::size_t k = 0;
  for (Index j = 0; j < h.cols; ++j)
    for (Index i = 0; i < h.rows; ++i) {
      if (h.complex) {
        m(i, j) = Complex(values[k], values[k + 1]);
        k += 2;
      } else {
        m(i, j) = Complex(values[k++], 0.0);
      }
    }
  return m;
}

RealMatrix read_real_file(const std::string& path) {
  auto in = open_in(path);
  return read_real(in);
}

ComplexMatrix read_complex_file(const std::string& path) {
  auto in = open_in(path);
  return read_complex(in);
}

RealOperator read_operator_file(const std::string& path) {
  return RealOperator(read_real_file(path));
}

void write_real(std::ostream& out, const RealMatrix& m) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      put(out, m(i, j));
      out << '\n';
    }
}

void write_complex(std::ostream& out, const ComplexMatrix& m) {
  out << "%%MatrixMarket matrix array complex general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      put(out, m(i, j).real());
      out << ' ';
      put(out, m(i, j).imag());
      out << '\n';
    }
}

void write_real_file(const std::string& path, const RealMatrix& m) {
  auto out = open_out(path);
  write_real(out, m);
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

void write_complex_file(const std::string& path, const ComplexMatrix& m) {
  auto out = open_out(path);
  write_complex(out, m);
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace symspace::mm
