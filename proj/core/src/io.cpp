#include "copulabounds/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace cbounds {

namespace {

std::string trim(std::string s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double number(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw FormatError("line " + std::to_string(n) + ": expected " +
                        std::to_string(t.header.size()) + " columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(number(c, n));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw FormatError("empty CSV");
  return t;
}

bool header_is(const Table& t, std::initializer_list<const char*> names) {
  if (t.header.size() != names.size()) return false;
  std::size_t i = 0;
  for (const char* n : names) {
    if (t.header[i++] != n) return false;
  }
  return true;
}

std::ifstream open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path);
  return f;
}

}  // namespace

Marginal read_marginal_csv(std::istream& in, double rate, double maturity) {
  const auto t = read_table(in);
  if (header_is(t, {"strike", "price"})) {
    std::vector<double> k, p;
    for (const auto& r : t.rows) {
      k.push_back(r[0]);
      p.push_back(r[1]);
    }
    return from_call_prices(k, p, rate, maturity);
  }
  if (header_is(t, {"x", "F"})) {
    std::vector<std::pair<double, double>> knots;
    for (const auto& r : t.rows) knots.emplace_back(r[0], r[1]);
    return Marginal::tabulated(std::move(knots));
  }
  throw FormatError("marginal CSV header must be 'strike,price' or 'x,F'");
}

Marginal read_marginal_csv(const std::string& path, double rate, double maturity) {
  auto f = open(path);
  return read_marginal_csv(f, rate, maturity);
}

ConstraintSet read_constraints_csv(std::istream& in, const Marginal& mx, const Marginal& my) {
  const auto t = read_table(in);
  std::vector<PointConstraint> pts;
  if (header_is(t, {"a", "b", "theta"})) {
    for (const auto& r : t.rows) pts.push_back({r[0], r[1], r[2]});
  } else if (header_is(t, {"T", "price"})) {
    for (const auto& r : t.rows) pts.push_back({mx.cdf(r[0]), my.cdf(r[0]), r[1]});
  } else {
    throw FormatError("constraint CSV header must be 'a,b,theta' or 'T,price'");
  }
  return ConstraintSet(std::move(pts));
}

ConstraintSet read_constraints_csv(const std::string& path, const Marginal& mx,
                                   const Marginal& my) {
  auto f = open(path);
  return read_constraints_csv(f, mx, my);
}

}  // namespace cbounds
