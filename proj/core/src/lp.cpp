#include "mgems/lp.hpp"

#include <cmath>
#include <sstream>

#include "mgems/csv.hpp"
#include "mgems/error.hpp"

namespace mgems::lp {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return csv::format(v);
}

double parse_num(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  return csv::parse_double(s);
}

std::string safe_name(const std::string& name, char prefix, int idx) {
  if (name.empty()) return prefix + std::to_string(idx);
  std::string out = name;
  for (char& c : out) {
    if (c == ' ' || c == '\t' || c == ':') c = '_';
  }
  return out;
}

const char* sense_token(Sense s) {
  switch (s) {
    case Sense::kLessEqual:
      return "le";
    case Sense::kEqual:
      return "eq";
    case Sense::kGreaterEqual:
      return "ge";
  }
  return "le";
}

Sense parse_sense(const std::string& s) {
  if (s == "le") return Sense::kLessEqual;
  if (s == "eq") return Sense::kEqual;
  if (s == "ge") return Sense::kGreaterEqual;
  throw InvalidArgument("lp text: unknown sense '" + s + "'");
}

}  // namespace

int LinearProgram::add_variable(double lower, double upper, double cost, std::string name) {
  vars_.push_back({lower, upper, cost, std::move(name)});
  return num_variables() - 1;
}

int LinearProgram::add_row(std::vector<Term> terms, Sense sense, double rhs, std::string name) {
  rows_.push_back({std::move(terms), sense, rhs, std::move(name)});
  return num_rows() - 1;
}

void LinearProgram::set_bounds(int col, double lower, double upper) {
  auto& v = vars_.at(col);
  v.lower = lower;
  v.upper = upper;
}

void LinearProgram::set_cost(int col, double cost) { vars_.at(col).cost = cost; }

void LinearProgram::set_rhs(int row, double rhs) { rows_.at(row).rhs = rhs; }

void LinearProgram::validate() const {
  for (int j = 0; j < num_variables(); ++j) {
    const auto& v = vars_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInf ||
        v.upper == -kInf || !std::isfinite(v.cost)) {
      throw InvalidArgument("lp '" + name_ + "': bad bounds or cost on column " +
                            std::to_string(j));
    }
  }
  for (int r = 0; r < num_rows(); ++r) {
    const auto& row = rows_[r];
    if (!std::isfinite(row.rhs)) {
      throw InvalidArgument("lp '" + name_ + "': non-finite rhs on row " + std::to_string(r));
    }
    for (const auto& t : row.terms) {
      if (t.col < 0 || t.col >= num_variables() || !std::isfinite(t.coef)) {
        throw InvalidArgument("lp '" + name_ + "': bad term on row " + std::to_string(r));
      }
    }
  }
}

double LinearProgram::objective(const std::vector<double>& x) const {
  double obj = offset_;
  for (int j = 0; j < num_variables(); ++j) obj += vars_[j].cost * x.at(j);
  return obj;
}

double LinearProgram::row_activity(int r, const std::vector<double>& x) const {
  double a = 0.0;
  for (const auto& t : rows_.at(r).terms) a += t.coef * x.at(t.col);
  return a;
}

std::string LinearProgram::to_text() const {
  std::ostringstream out;
  out << "lp " << safe_name(name_, 'p', 0) << '\n';
  out << "offset " << num(offset_) << '\n';
  for (int j = 0; j < num_variables(); ++j) {
    const auto& v = vars_[j];
    out << "var " << j << ' ' << safe_name(v.name, 'x', j) << ' ' << num(v.lower) << ' '
        << num(v.upper) << ' ' << num(v.cost) << '\n';
  }
  for (int r = 0; r < num_rows(); ++r) {
    const auto& row = rows_[r];
    out << "row " << r << ' ' << safe_name(row.name, 'r', r) << ' ' << sense_token(row.sense)
        << ' ' << num(row.rhs) << " :";
    for (const auto& t : row.terms) out << ' ' << t.col << ':' << num(t.coef);
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

LinearProgram LinearProgram::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  LinearProgram lp;
  bool started = false;
  bool ended = false;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw InvalidArgument("lp text line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "lp") {
      ls >> lp.name_;
      started = true;
    } else if (!started) {
      fail("expected 'lp <name>' header");
    } else if (kind == "offset") {
      std::string v;
      ls >> v;
      lp.offset_ = parse_num(v);
    } else if (kind == "var") {
      int idx = -1;
      std::string name, lo, hi, cost;
      ls >> idx >> name >> lo >> hi >> cost;
      if (!ls || idx != lp.num_variables()) fail("malformed var record");
      lp.add_variable(parse_num(lo), parse_num(hi), parse_num(cost), name);
    } else if (kind == "row") {
      int idx = -1;
      std::string name, sense, rhs, colon;
      ls >> idx >> name >> sense >> rhs >> colon;
      if (!ls || idx != lp.num_rows() || colon != ":") fail("malformed row record");
      std::vector<Term> terms;
      std::string tok;
      while (ls >> tok) {
        const auto pos = tok.find(':');
        if (pos == std::string::npos) fail("term must be <col>:<coef>");
        terms.push_back({std::stoi(tok.substr(0, pos)), parse_num(tok.substr(pos + 1))});
      }
      lp.add_row(std::move(terms), parse_sense(sense), parse_num(rhs), name);
    } else if (kind == "end") {
      ended = true;
      break;
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  if (!ended) throw InvalidArgument("lp text: missing 'end'");
  lp.validate();
  return lp;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

}  // namespace mgems::lp
