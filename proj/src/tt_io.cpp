#include "ttgp/tt_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace ttgp {

namespace {

constexpr char kMagic[4] = {'T', 'T', '1', '\0'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("TT1: unexpected end of stream");
  return to_little(v);
}

std::uint32_t as_u32(Index v) {
  if (v < 0 || v > static_cast<Index>(UINT32_MAX)) throw FormatError("TT1: size does not fit in u32");
  return static_cast<std::uint32_t>(v);
}

void write_header(std::ostream& out, std::uint8_t kind, const std::vector<Index>& sizes,
                  const std::vector<Index>& ranks) {
  out.write(kMagic, 4);
  put<std::uint8_t>(out, kind);
  put<std::uint32_t>(out, as_u32(static_cast<Index>(ranks.size()) - 1));
  for (Index n : sizes) put<std::uint32_t>(out, as_u32(n));
  for (Index r : ranks) put<std::uint32_t>(out, as_u32(r));
}

// Element (a, mode, b) in file order: a slowest, b fastest. For matrices the
// mode expands to (row, col) with row before col.
void write_core(std::ostream& out, const Core3& c, Index rows, Index cols) {
  for (Index a = 0; a < c.left_rank(); ++a)
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j)
        for (Index b = 0; b < c.right_rank(); ++b) put<double>(out, c(a, i + rows * j, b));
}

Core3 read_core(std::istream& in, Index left, Index rows, Index cols, Index right) {
  Core3 c(left, rows * cols, right);
  for (Index a = 0; a < left; ++a)
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j)
        for (Index b = 0; b < right; ++b) c(a, i + rows * j, b) = get<double>(in);
  return c;
}

}  // namespace

void write_tt(std::ostream& out, const TTTensor& t) {
  write_header(out, 0, t.mode_sizes(), t.ranks());
  for (const auto& c : t.cores()) write_core(out, c, c.mode_size(), 1);
  if (!out) throw FormatError("TT1: write failed");
}

void write_tt(std::ostream& out, const TTMatrix& m) {
  std::vector<Index> sizes;
  for (Index d = 0; d < m.order(); ++d) {
    sizes.push_back(m.row_sizes()[static_cast<std::size_t>(d)]);
    sizes.push_back(m.col_sizes()[static_cast<std::size_t>(d)]);
  }
  write_header(out, 1, sizes, m.ranks());
  for (Index d = 0; d < m.order(); ++d)
    write_core(out, m.core(d), m.row_sizes()[static_cast<std::size_t>(d)], m.col_sizes()[static_cast<std::size_t>(d)]);
  if (!out) throw FormatError("TT1: write failed");
}

TTObject read_tt(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("TT1: bad magic");
  const auto kind = get<std::uint8_t>(in);
  if (kind > 1) throw FormatError("TT1: unknown kind");
  const auto order = static_cast<Index>(get<std::uint32_t>(in));
  if (order == 0) throw FormatError("TT1: order must be positive");
  std::vector<Index> rows(static_cast<std::size_t>(order)), cols(static_cast<std::size_t>(order), 1);
  for (Index d = 0; d < order; ++d) {
    rows[static_cast<std::size_t>(d)] = get<std::uint32_t>(in);
    if (kind == 1) cols[static_cast<std::size_t>(d)] = get<std::uint32_t>(in);
  }
  std::vector<Index> ranks(static_cast<std::size_t>(order + 1));
  for (auto& r : ranks) r = get<std::uint32_t>(in);
  std::vector<Core3> cores;
  for (std::size_t d = 0; d < rows.size(); ++d)
    cores.push_back(read_core(in, ranks[d], rows[d], cols[d], ranks[d + 1]));
  try {
    if (kind == 0) return TTTensor(std::move(cores));
    return TTMatrix(std::move(cores), rows, cols);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("TT1: ") + e.what());
  }
}

namespace {

template <class T>
void save_impl(const std::filesystem::path& path, const T& obj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_tt(out, obj);
}

template <class T>
T load_impl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  TTObject obj = read_tt(in);
  if (!std::holds_alternative<T>(obj)) throw FormatError("TT1: unexpected object kind in " + path.string());
  return std::get<T>(std::move(obj));
}

}  // namespace

void save_tt(const std::filesystem::path& path, const TTTensor& t) { save_impl(path, t); }
void save_tt(const std::filesystem::path& path, const TTMatrix& m) { save_impl(path, m); }
TTTensor load_tt_tensor(const std::filesystem::path& path) { return load_impl<TTTensor>(path); }
TTMatrix load_tt_matrix(const std::filesystem::path& path) { return load_impl<TTMatrix>(path); }

}  // namespace ttgp
