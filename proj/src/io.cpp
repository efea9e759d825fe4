#include "cutproj/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cutproj/error.hpp"

namespace cutproj {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorKind::IoError, "cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorKind::IoError, "cannot open " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::ParseError, path + ": missing header");
  t.header = split(line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    auto cells = split(line);
    if (cells.size() != t.header.size())
      fail(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": expected " +
                                      std::to_string(t.header.size()) + " fields");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

int count_prefix(const std::vector<std::string>& header, const std::string& prefix) {
  int n = 0;
  while (n < static_cast<int>(header.size()) &&
         std::find(header.begin(), header.end(), prefix + std::to_string(n + 1)) !=
             header.end())
    ++n;
  return n;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    fail(ErrorKind::ParseError, "missing column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

double to_real(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(ErrorKind::ParseError, "bad number '" + s + "'");
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(ErrorKind::ParseError, "bad integer '" + s + "'");
  return v;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    out << (i ? "," : "") << cells[i];
  out << '\n';
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i)
    v.push_back(prefix + std::to_string(i));
  return v;
}

}  // namespace

void write_comb_csv(const std::string& path, const WeightedComb& comb) {
  auto out = open_out(path);
  auto header = numbered("position_", comb.physical_box.dim());
  header.insert(header.end(), {"weight_re", "weight_im"});
  write_row(out, header);
  for (const Atom& a : comb.atoms) {
    std::vector<std::string> row;
    for (Eigen::Index i = 0; i < a.position.size(); ++i)
      row.push_back(format_real(a.position[i]));
    row.push_back(format_real(a.weight.real()));
    row.push_back(format_real(a.weight.imag()));
    write_row(out, row);
  }
  if (!out)
    fail(ErrorKind::IoError, "write to " + path + " failed");
}

std::vector<Atom> read_comb_csv(const std::string& path) {
  Table t = read_table(path);
  int d = count_prefix(t.header, "position_");
  std::size_t re = column(t.header, "weight_re"), im = column(t.header, "weight_im");
  std::vector<Atom> atoms;
  for (const auto& row : t.rows) {
    Atom a{Vector(d), Complex(to_real(row[re]), to_real(row[im]))};
    for (int i = 0; i < d; ++i)
      a.position[i] = to_real(row[column(t.header, "position_" + std::to_string(i + 1))]);
    atoms.push_back(std::move(a));
  }
  return atoms;
}

void write_peaks_csv(const std::string& path, const PeakList& peaks, int d, int m) {
  auto out = open_out(path);
  auto header = numbered("k_", d);
  for (auto& h : numbered("z_", d + m))
    header.push_back(h);
  for (auto& h : numbered("eta_", m))
    header.push_back(h);
  header.insert(header.end(), {"c_re", "c_im", "intensity"});
  write_row(out, header);
  for (const Peak& p : peaks.peaks) {
    std::vector<std::string> row;
    for (int i = 0; i < d; ++i)
      row.push_back(format_real(p.k[i]));
    for (int i = 0; i < d + m; ++i)
      row.push_back(std::to_string(p.z[i]));
    for (int i = 0; i < m; ++i)
      row.push_back(format_real(p.eta[i]));
    row.push_back(format_real(p.c.real()));
    row.push_back(format_real(p.c.imag()));
    row.push_back(format_real(p.intensity));
    write_row(out, row);
  }
  if (!out)
    fail(ErrorKind::IoError, "write to " + path + " failed");
}

std::vector<Peak> read_peaks_csv(const std::string& path) {
  Table t = read_table(path);
  int d = count_prefix(t.header, "k_");
  int n = count_prefix(t.header, "z_");
  int m = count_prefix(t.header, "eta_");
  if (n != d + m)
    fail(ErrorKind::ParseError, path + ": z columns do not match k and eta columns");
  std::size_t cre = column(t.header, "c_re"), cim = column(t.header, "c_im"),
              inten = column(t.header, "intensity");
  std::vector<Peak> peaks;
  for (const auto& row : t.rows) {
    Peak p{Vector(d), IntVector(n), Vector(m), Complex(to_real(row[cre]), to_real(row[cim])),
           to_real(row[inten])};
    for (int i = 0; i < d; ++i)
      p.k[i] = to_real(row[column(t.header, "k_" + std::to_string(i + 1))]);
    for (int i = 0; i < n; ++i)
      p.z[i] = to_int(row[column(t.header, "z_" + std::to_string(i + 1))]);
    for (int i = 0; i < m; ++i)
      p.eta[i] = to_real(row[column(t.header, "eta_" + std::to_string(i + 1))]);
    peaks.push_back(std::move(p));
  }
  return peaks;
}

void write_autocorr_csv(const std::string& path, const AutocorrelationTable& table, int d,
                        int n) {
  auto out = open_out(path);
  auto header = numbered("l_", d);
  for (auto& h : numbered("z_", n))
    header.push_back(h);
  header.insert(header.end(), {"eta_re", "eta_im"});
  write_row(out, header);
  for (const AutocorrEntry& e : table.entries) {
    std::vector<std::string> row;
    for (int i = 0; i < d; ++i)
      row.push_back(format_real(e.l[i]));
    for (int i = 0; i < n; ++i)
      row.push_back(e.z.size() == n ? std::to_string(e.z[i]) : std::string());
    row.push_back(format_real(e.eta.real()));
    row.push_back(format_real(e.eta.imag()));
    write_row(out, row);
  }
  if (!out)
    fail(ErrorKind::IoError, "write to " + path + " failed");
}

std::vector<AutocorrEntry> read_autocorr_csv(const std::string& path) {
  Table t = read_table(path);
  int d = count_prefix(t.header, "l_");
  int n = count_prefix(t.header, "z_");
  std::size_t re = column(t.header, "eta_re"), im = column(t.header, "eta_im");
  std::vector<AutocorrEntry> entries;
  for (const auto& row : t.rows) {
    AutocorrEntry e{Vector(d), IntVector(), Complex(to_real(row[re]), to_real(row[im]))};
    for (int i = 0; i < d; ++i)
      e.l[i] = to_real(row[column(t.header, "l_" + std::to_string(i + 1))]);
    if (n > 0 && !row[column(t.header, "z_1")].empty()) {
      e.z.resize(n);
      for (int i = 0; i < n; ++i)
        e.z[i] = to_int(row[column(t.header, "z_" + std::to_string(i + 1))]);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace cutproj
