#pragma once

#include <iosfwd>
#include <string>

#include "symspace/operator_core.hpp"

namespace symspace::mm {

// Matrix Market dense "array" format, general symmetry only. Entries are stored
// column-major; real values are written with 17 significant digits so a
// write/read cycle reproduces every double exactly.

RealMatrix read_real(std::istream& in);
ComplexMatrix read_complex(std::istream& in);
RealMatrix read_real_file(const std::string& path);
ComplexMatrix read_complex_file(const std::string& path);

// Square real operator; throws NotSquare for rectangular arrays.
RealOperator read_operator_file(const std::string& path);

void write_real(std::ostream& out, const RealMatrix& m);
void write_complex(std::ostream& out, const ComplexMatrix& m);
void write_real_file(const std::string& path, const RealMatrix& m);
void write_complex_file(const std::string& path, const ComplexMatrix& m);

}  // namespace symspace::mm
