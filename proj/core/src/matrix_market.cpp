#include "lowrank/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lowrank/errors.hpp"

namespace lowrank {

std::string format_double(double x) {
  // Shortest representation that round-trips: try increasing precision.
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Next non-comment, non-blank line.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw IoError("MatrixMarket: empty input");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw IoError("MatrixMarket: bad banner line: " + header);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate")
    throw IoError("MatrixMarket: unsupported format: " + format);
  if (field != "real" && field != "integer" && field != "pattern")
    throw IoError("MatrixMarket: unsupported field: " + field);
  if (field == "pattern" && format != "coordinate")
    throw IoError("MatrixMarket: pattern requires coordinate format");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw IoError("MatrixMarket: unsupported symmetry: " + symmetry);

  std::string line;
  if (!next_data_line(in, line))
    throw IoError("MatrixMarket: missing size line");
  std::istringstream sizes(line);

  if (format == "array") {
    Eigen::Index rows = 0, cols = 0;
    if (!(sizes >> rows >> cols) || rows < 0 || cols < 0)
      throw IoError("MatrixMarket: bad array size line: " + line);
    Matrix a(rows, cols);
    // Array entries are listed column by column. A symmetric array file
    // stores only the lower triangle.
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line))
          throw IoError("MatrixMarket: truncated array data");
        double v = 0.0;
        std::istringstream es(line);
        if (!(es >> v)) throw IoError("MatrixMarket: bad entry: " + line);
        a(i, j) = v;
        if (symmetric) a(j, i) = v;
      }
    }
    return a;
  }

  // Coordinate format.
  Eigen::Index rows = 0, cols = 0;
  long long nnz = 0;
  if (!(sizes >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    throw IoError("MatrixMarket: bad coordinate size line: " + line);
  Matrix a = Matrix::Zero(rows, cols);
  for (long long e = 0; e < nnz; ++e) {
    if (!next_data_line(in, line))
      throw IoError("MatrixMarket: truncated coordinate data");
    std::istringstream es(line);
    Eigen::Index i = 0, j = 0;
    double v = 1.0;  // pattern entries are implicit ones
    if (!(es >> i >> j)) throw IoError("MatrixMarket: bad entry: " + line);
    if (field != "pattern" && !(es >> v))
      throw IoError("MatrixMarket: bad entry: " + line);
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw IoError("MatrixMarket: index out of range: " + line);
    a(i - 1, j - 1) = v;
    if (symmetric) a(j - 1, i - 1) = v;
  }
  return a;
}

Matrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_matrix_market(in);
}

void write_matrix_market_array(std::ostream& out, const Matrix& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << " " << a.cols() << "\n";
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out << format_double(a(i, j)) << "\n";
}

void write_matrix_market_array_file(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_matrix_market_array(out, a);
}

void write_matrix_market_coordinate(std::ostream& out, const Matrix& a) {
  long long nnz = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0.0) ++nnz;
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << nnz << "\n";
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0.0)
        out << (i + 1) << " " << (j + 1) << " " << format_double(a(i, j))
            << "\n";
}

void write_matrix_market_coordinate_file(const std::string& path,
                                         const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_matrix_market_coordinate(out, a);
}

}  // namespace lowrank
