#include "bsp/matrix_io.hpp"

#include "bsp/error.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace bsp {
namespace {

constexpr std::array<char, 4> kMagic{'B', 'S', 'P', 'M'};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

void check_unique_ids(const std::vector<std::string>& ids, const std::string& source) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw ParseError(source + ": duplicate feature id '" + id + "'");
  }
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return r;
  } else {
    return v;
  }
}

std::uint64_t read_u64(std::istream& in, const std::string& source) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError(source + ": truncated binary header");
  return to_little(v);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

}  // namespace

LabeledMatrix read_csv_matrix(std::istream& in, const std::string& source) {
  std::string line;
  LabeledMatrix m;
  if (!std::getline(in, line)) throw ParseError(source + ": empty file");
  for (auto f : split_fields(line)) {
    if (f.empty()) throw ParseError(source + ": empty feature id in header");
    m.ids.emplace_back(f);
  }
  check_unique_ids(m.ids, source);
  const auto cols = static_cast<Eigen::Index>(m.ids.size());

  std::vector<double> values;
  Eigen::Index rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (static_cast<Eigen::Index>(fields.size()) != cols) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                       " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto f = fields[j];
      double v = 0.0;
      const auto* first = f.data();
      const auto* last = f.data() + f.size();
      if (!f.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (f.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": non-numeric cell '" + std::string(f) +
                         "' in column '" + m.ids[j] + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }

  m.values.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m.values(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  return m;
}

void write_csv_matrix(std::ostream& out, const LabeledMatrix& m) {
  for (std::size_t j = 0; j < m.ids.size(); ++j) out << (j ? "," : "") << m.ids[j];
  out << '\n';
  std::array<char, 32> buf{};
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), m.values(i, j));
      if (j) out << ',';
      out.write(buf.data(), ptr - buf.data());
    }
    out << '\n';
  }
}

LabeledMatrix read_binary_matrix(std::istream& in, const std::string& source) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ParseError(source + ": missing BSPM magic");
  const std::uint64_t rows = read_u64(in, source);
  const std::uint64_t cols = read_u64(in, source);
  LabeledMatrix m;
  m.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      const std::uint64_t bits = read_u64(in, source);
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::bit_cast<double>(bits);
    }
  }
  std::string id;
  while (m.ids.size() < cols && std::getline(in, id)) m.ids.push_back(id);
  if (m.ids.size() != cols) throw ParseError(source + ": expected " + std::to_string(cols) + " feature ids");
  check_unique_ids(m.ids, source);
  return m;
}

void write_binary_matrix(std::ostream& out, const LabeledMatrix& m) {
  out.write(kMagic.data(), kMagic.size());
  write_u64(out, static_cast<std::uint64_t>(m.values.rows()));
  write_u64(out, static_cast<std::uint64_t>(m.values.cols()));
  for (Eigen::Index i = 0; i < m.values.rows(); ++i)
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) write_u64(out, std::bit_cast<std::uint64_t>(m.values(i, j)));
  for (const auto& id : m.ids) out << id << '\n';
}

LabeledMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_binary_matrix(in, path.string()) : read_csv_matrix(in, path.string());
}

void write_matrix(const std::filesystem::path& path, const LabeledMatrix& m, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (binary)
    write_binary_matrix(out, m);
  else
    write_csv_matrix(out, m);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace bsp
