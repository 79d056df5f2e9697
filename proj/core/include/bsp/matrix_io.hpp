#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace bsp {

// A samples × features matrix with one identifier per column.
struct LabeledMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> ids;
};

// CSV layout: the first row holds the feature identifiers, every following row
// is one sample of decimal numbers. Blank trailing lines are ignored.
LabeledMatrix read_csv_matrix(std::istream& in, const std::string& source = "<stream>");
void write_csv_matrix(std::ostream& out, const LabeledMatrix& m);

// Binary layout: magic "BSPM", u64 rows, u64 cols, rows*cols little-endian
// float64 in row-major order, then the column identifiers separated by '\n'.
LabeledMatrix read_binary_matrix(std::istream& in, const std::string& source = "<stream>");
void write_binary_matrix(std::ostream& out, const LabeledMatrix& m);

// Dispatches on the leading magic bytes.
LabeledMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const LabeledMatrix& m, bool binary = false);

}  // namespace bsp
