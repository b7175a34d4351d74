#include "mgems/value_function_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mgems/csv.hpp"
#include "mgems/error.hpp"

namespace mgems {

namespace {

constexpr const char* kMagic = "mgems-value-functions v1";

std::string next_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw IoError("value functions: unexpected end of input after line " + std::to_string(line_no));
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw IoError("value functions line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void write_value_functions(const std::vector<PolyhedralFunction>& value, std::ostream& out) {
  out << kMagic << '\n' << "steps " << value.size() << '\n';
  for (std::size_t t = 0; t < value.size(); ++t) {
    out << "step " << t << ' ' << value[t].size() << '\n';
    for (const auto& c : value[t].cuts()) {
      for (double l : c.lambda) out << csv::format(l) << ' ';
      out << csv::format(c.beta) << '\n';
    }
  }
  out << "end\n";
}

std::vector<PolyhedralFunction> read_value_functions(std::istream& in) {
  int ln = 0;
  if (next_line(in, ln) != kMagic) fail(ln, "missing header '" + std::string(kMagic) + "'");
  std::istringstream head(next_line(in, ln));
  std::string key;
  long long steps = -1;
  if (!(head >> key >> steps) || key != "steps" || steps < 1) fail(ln, "expected 'steps <n>'");
  std::vector<PolyhedralFunction> value(static_cast<std::size_t>(steps));
  for (long long t = 0; t < steps; ++t) {
    std::istringstream sl(next_line(in, ln));
    long long idx = -1, count = -1;
    if (!(sl >> key >> idx >> count) || key != "step" || idx != t || count < 0) {
      fail(ln, "expected 'step " + std::to_string(t) + " <count>'");
    }
    for (long long k = 0; k < count; ++k) {
      std::istringstream cl(next_line(in, ln));
      Vec4 lambda{};
      std::string tok;
      double beta = 0.0;
      for (int q = 0; q < 5; ++q) {
        if (!(cl >> tok)) fail(ln, "cut needs 5 numbers");
        try {
          (q < 4 ? lambda[q] : beta) = csv::parse_double(tok);
        } catch (const Error&) {
          fail(ln, "bad number '" + tok + "'");
        }
      }
      if (cl >> tok) fail(ln, "trailing text '" + tok + "'");
      try {
        value[t].add_cut(lambda, beta);
      } catch (const InvalidArgument& e) {
        fail(ln, e.what());
      }
    }
  }
  if (next_line(in, ln) != "end") fail(ln, "expected 'end'");
  return value;
}

void save_value_functions(const std::vector<PolyhedralFunction>& value, const std::string& path) {
  auto out = csv::open_for_write(path);
  write_value_functions(value, out);
  if (!out) throw IoError("cannot write " + path);
}

std::vector<PolyhedralFunction> load_value_functions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_value_functions(in);
}

}  // namespace mgems
