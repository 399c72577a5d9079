#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <variant>

#include "ttgp/tt.hpp"

namespace ttgp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary "TT1" container: magic, kind byte, order, mode sizes, ranks, then
// little-endian doubles per core with the left rank slowest and the right
// rank fastest.
void write_tt(std::ostream& out, const TTTensor& t);
void write_tt(std::ostream& out, const TTMatrix& m);

using TTObject = std::variant<TTTensor, TTMatrix>;
TTObject read_tt(std::istream& in);

void save_tt(const std::filesystem::path& path, const TTTensor& t);
void save_tt(const std::filesystem::path& path, const TTMatrix& m);
TTTensor load_tt_tensor(const std::filesystem::path& path);
TTMatrix load_tt_matrix(const std::filesystem::path& path);

}  // namespace ttgp
