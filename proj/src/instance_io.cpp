#include "mblp/instance_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace mblp {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

double parse_double(const std::string& s, int line) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ParseError(line, "expected a number, got '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw ParseError(line, "expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

struct BandLine {
  int band, lower, upper, line;
};

BandProfile assemble_profile(const std::vector<BandLine>& lines) {
  int kmin = 0, kmax = 0;
  for (const BandLine& b : lines) {
    kmin = std::min(kmin, b.band);
    kmax = std::max(kmax, b.band);
  }
  BandProfile p;
  p.negative_bands = -kmin;
  p.positive_bands = kmax;
  p.lower_counts = Eigen::VectorXi::Zero(p.num_bands());
  p.upper_counts = Eigen::VectorXi::Zero(p.num_bands());
  std::vector<bool> seen(p.num_bands(), false);
  for (const BandLine& b : lines) {
    if (seen[p.index(b.band)]) throw ParseError(b.line, fmt::format("band {} listed twice", b.band));
    seen[p.index(b.band)] = true;
    p.lower_counts(p.index(b.band)) = b.lower;
    p.upper_counts(p.index(b.band)) = b.upper;
  }
  for (int k = kmin; k <= kmax; ++k)
    if (!seen[p.index(k)]) throw ParseError(lines.back().line, fmt::format("band {} missing from section", k));
  return p;
}

}  // namespace

Instance read_instance(std::istream& in) {
  enum class Section { None, Lp, Bands, BandsRow, Deviations };
  Section section = Section::None;
  int section_row = -1;

  Instance inst;
  LinearProgram& lp = inst.lp;
  lp.sense = ObjSense::Maximize;
  int nvars = -1, nrows = -1;
  bool sized = false;

  std::vector<BandLine> shared_bands;
  std::map<int, std::vector<BandLine>> row_bands;
  struct DevLine {
    int row, col, band, line;
    double value;
  };
  std::vector<DevLine> devs;

  auto require_sized = [&](int line) {
    if (!sized) throw ParseError(line, "'vars' and 'rows' must appear before indexed lines");
  };
  auto check_row = [&](int i, int line) {
    if (i < 0 || i >= nrows) throw ParseError(line, fmt::format("row index {} outside [0, {})", i, nrows));
  };
  auto check_col = [&](int j, int line) {
    if (j < 0 || j >= nvars) throw ParseError(line, fmt::format("column index {} outside [0, {})", j, nvars));
  };

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0];

    if (head == "[lp]") {
      section = Section::Lp;
      continue;
    }
    if (head == "[bands]") {
      section = Section::Bands;
      continue;
    }
    if (head == "[bands" && toks.size() == 3 && toks[1] == "row") {
      std::string t = toks[2];
      if (t.empty() || t.back() != ']') throw ParseError(lineno, "malformed [bands row I] header");
      section = Section::BandsRow;
      section_row = parse_int(t.substr(0, t.size() - 1), lineno);
      require_sized(lineno);
      check_row(section_row, lineno);
      continue;
    }
    if (head == "[deviations]") {
      section = Section::Deviations;
      continue;
    }
    if (head == "[varmap]") break;  // sidecar section, handled by its owner

    switch (section) {
      case Section::None:
        throw ParseError(lineno, "data before any section header");
      case Section::Lp: {
        if (head == "sense" && toks.size() == 2) {
          if (toks[1] == "maximize" || toks[1] == "max")
            lp.sense = ObjSense::Maximize;
          else if (toks[1] == "minimize" || toks[1] == "min")
            lp.sense = ObjSense::Minimize;
          else
            throw ParseError(lineno, "sense must be maximize or minimize");
        } else if (head == "vars" && toks.size() == 2) {
          nvars = parse_int(toks[1], lineno);
        } else if (head == "rows" && toks.size() == 2) {
          nrows = parse_int(toks[1], lineno);
        } else if (head == "obj" && toks.size() == 3) {
          require_sized(lineno);
          const int j = parse_int(toks[1], lineno);
          check_col(j, lineno);
          lp.objective(j) = parse_double(toks[2], lineno);
        } else if (head == "a" && toks.size() == 4) {
          require_sized(lineno);
          const int i = parse_int(toks[1], lineno);
          const int j = parse_int(toks[2], lineno);
          check_row(i, lineno);
          check_col(j, lineno);
          lp.rows[i].push_back({j, parse_double(toks[3], lineno)});
        } else if (head == "rsense" && toks.size() == 3) {
          require_sized(lineno);
          const int i = parse_int(toks[1], lineno);
          check_row(i, lineno);
          if (toks[2] == "<=")
            lp.row_sense[i] = RowSense::LessEqual;
          else if (toks[2] == ">=")
            lp.row_sense[i] = RowSense::GreaterEqual;
          else if (toks[2] == "=")
            lp.row_sense[i] = RowSense::Equal;
          else
            throw ParseError(lineno, "row sense must be <=, >= or =");
        } else if (head == "rhs" && toks.size() == 3) {
          require_sized(lineno);
          const int i = parse_int(toks[1], lineno);
          check_row(i, lineno);
          lp.rhs(i) = parse_double(toks[2], lineno);
        } else if (head == "lb" && toks.size() == 3) {
          require_sized(lineno);
          const int j = parse_int(toks[1], lineno);
          check_col(j, lineno);
          lp.var_lower(j) = parse_double(toks[2], lineno);
        } else if (head == "ub" && toks.size() == 3) {
          require_sized(lineno);
          const int j = parse_int(toks[1], lineno);
          check_col(j, lineno);
          lp.var_upper(j) = parse_double(toks[2], lineno);
        } else {
          throw ParseError(lineno, "unrecognized [lp] line '" + head + "'");
        }
        if (nvars >= 0 && nrows >= 0 && !sized) {
          const ObjSense sense = lp.sense;
          lp = LinearProgram::sized(sense, nvars, nrows);
          sized = true;
        }
        break;
      }
      case Section::Bands:
      case Section::BandsRow: {
        if (head != "band" || toks.size() != 4) throw ParseError(lineno, "expected 'band K L U'");
        BandLine b{parse_int(toks[1], lineno), parse_int(toks[2], lineno), parse_int(toks[3], lineno),
                   lineno};
        if (section == Section::Bands)
          shared_bands.push_back(b);
        else
          row_bands[section_row].push_back(b);
        break;
      }
      case Section::Deviations: {
        if (head != "d" || toks.size() != 5) throw ParseError(lineno, "expected 'd I J K V'");
        require_sized(lineno);
        const int i = parse_int(toks[1], lineno);
        const int j = parse_int(toks[2], lineno);
        check_row(i, lineno);
        check_col(j, lineno);
        devs.push_back({i, j, parse_int(toks[3], lineno), lineno, parse_double(toks[4], lineno)});
        break;
      }
    }
  }

  if (!sized) {
    if (nvars < 0 && nrows < 0 && section == Section::None)
      throw ParseError(lineno == 0 ? 1 : lineno, "empty instance");
    throw ParseError(lineno, "missing 'vars'/'rows' sizes");
  }
  for (SparseRow& row : lp.rows)
    std::sort(row.begin(), row.end(), [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });

  MultiBandUncertaintySet& u = inst.uncertainty;
  if (!shared_bands.empty())
    u.profile = assemble_profile(shared_bands);
  else
    u.profile = BandProfile::zero(0, 0, nvars);
  for (const auto& [row, lines] : row_bands) u.row_profiles[row] = assemble_profile(lines);

  for (const DevLine& d : devs) {
    const BandProfile& prof = u.profile_for(d.row);
    if (d.band < prof.min_band() || d.band > prof.max_band())
      throw ParseError(d.line, fmt::format("band {} outside the profile of row {}", d.band, d.row));
    auto [it, fresh] = u.deviations.try_emplace(CoeffKey{d.row, d.col},
                                                Eigen::VectorXd::Zero(prof.num_bands()));
    (void)fresh;
    it->second(prof.index(d.band)) = d.value;
  }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return read_instance(in);
}

namespace {

void write_profile(std::ostream& out, const BandProfile& p) {
  for (int k = p.min_band(); k <= p.max_band(); ++k)
    out << "band " << k << ' ' << p.lower(k) << ' ' << p.upper(k) << '\n';
}

}  // namespace

void write_instance(std::ostream& out, const Instance& inst) {
  const LinearProgram& lp = inst.lp;
  out << "[lp]\n";
  out << "sense " << (lp.sense == ObjSense::Maximize ? "maximize" : "minimize") << '\n';
  out << "vars " << lp.num_vars() << '\n';
  out << "rows " << lp.num_rows() << '\n';
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.objective(j) != 0.0) out << "obj " << j << ' ' << format_double(lp.objective(j)) << '\n';
  for (int i = 0; i < lp.num_rows(); ++i)
    for (const RowEntry& e : lp.rows[i])
      out << "a " << i << ' ' << e.col << ' ' << format_double(e.value) << '\n';
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char* s = lp.row_sense[i] == RowSense::LessEqual
                        ? "<="
                        : (lp.row_sense[i] == RowSense::GreaterEqual ? ">=" : "=");
    out << "rsense " << i << ' ' << s << '\n';
  }
  for (int i = 0; i < lp.num_rows(); ++i) out << "rhs " << i << ' ' << format_double(lp.rhs(i)) << '\n';
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.var_lower(j) != 0.0) out << "lb " << j << ' ' << format_double(lp.var_lower(j)) << '\n';
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.var_upper(j) != kInf) out << "ub " << j << ' ' << format_double(lp.var_upper(j)) << '\n';

  const MultiBandUncertaintySet& u = inst.uncertainty;
  out << "[bands]\n";
  write_profile(out, u.profile);
  for (const auto& [row, prof] : u.row_profiles) {
    out << "[bands row " << row << "]\n";
    write_profile(out, prof);
  }
  if (!u.deviations.empty()) {
    out << "[deviations]\n";
    for (const auto& [key, d] : u.deviations) {
      const BandProfile& prof = u.profile_for(key.row);
      for (int k = prof.min_band(); k <= prof.max_band(); ++k)
        out << "d " << key.row << ' ' << key.col << ' ' << k << ' '
            << format_double(d(prof.index(k))) << '\n';
    }
  }
}

void write_instance_file(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_instance(out, inst);
}

Eigen::VectorXd read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);
  std::vector<double> vals;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    if (toks.size() != 1) throw ParseError(lineno, "expected one value per line");
    vals.push_back(parse_double(toks[0], lineno));
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<long>(vals.size()));
}

void write_vector_file(const std::string& path, const Eigen::VectorXd& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (long i = 0; i < x.size(); ++i) out << format_double(x(i)) << '\n';
}

}  // namespace mblp
