#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mblp/model.hpp"

namespace mblp {

/// Parse failure with the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

struct Instance {
  LinearProgram lp;
  MultiBandUncertaintySet uncertainty;
};

/// Line-oriented instance format with [lp], [bands], [bands row I] and
/// [deviations] sections; see README for the grammar. Floats are written
/// with %.17g so parse(write(x)) == x holds exactly.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& inst);
void write_instance_file(const std::string& path, const Instance& inst);

/// Plain vector file, one value per line.
Eigen::VectorXd read_vector_file(const std::string& path);
void write_vector_file(const std::string& path, const Eigen::VectorXd& x);

std::string format_double(double v);

}  // namespace mblp
