// SPDX-License-Identifier: Apache-2.0

#include "partflux/operator_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include "partflux/error.hpp"

namespace partflux
{

namespace
{

constexpr std::string_view kMagic = "DMDF";
constexpr std::uint32_t kFactored = 1, kDense = 2;

class Writer
{
public:
  void U32(std::uint32_t v)
  {
    for (int i = 0; i < 4; i++)
    {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
  }
  void U64(std::uint64_t v)
  {
    for (int i = 0; i < 8; i++)
    {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
  }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Matrix(const Eigen::MatrixXd &m)
  {
    for (Eigen::Index j = 0; j < m.cols(); j++)
    {
      for (Eigen::Index i = 0; i < m.rows(); i++)
      {
        F64(m(i, j));
      }
    }
  }
  void Raw(std::string_view s) { out_.append(s); }
  std::string &bytes() { return out_; }

private:
  std::string out_;
};

class Reader
{
public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint64_t Bytes(int n)
  {
    Require(pos_ + n <= in_.size(), ErrorKind::Format, "operator file is truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < n; i++)
    {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return v;
  }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Bytes(4)); }
  std::uint64_t U64() { return Bytes(8); }
  double F64() { return std::bit_cast<double>(U64()); }
  Eigen::MatrixXd Matrix(std::uint32_t rows, std::uint32_t cols)
  {
    Require(static_cast<std::uint64_t>(rows) * cols * 8 <= in_.size() - pos_,
            ErrorKind::Format, "operator file is truncated");
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t j = 0; j < cols; j++)
    {
      for (std::uint32_t i = 0; i < rows; i++)
      {
        m(i, j) = F64();
      }
    }
    return m;
  }
  std::size_t pos() const { return pos_; }

private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t Fnv1a64(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : bytes)
  {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string SerializeOperator(const DmdFluxOperator &op)
{
  const OperatorInfo &info = op.info();
  Writer w;
  w.Raw(kMagic);
  w.U32(kOperatorFormatVersion);
  w.U32(op.IsFactored() ? kFactored : kDense);
  w.U32(static_cast<std::uint32_t>(info.layout.num_interface));
  w.U32(static_cast<std::uint32_t>(info.layout.Size()));
  w.U32(static_cast<std::uint32_t>(info.rank));
  w.U32(static_cast<std::uint32_t>(info.layout.patch_size));
  w.U32(static_cast<std::uint32_t>(info.layout.grid_n));
  w.F64(info.mu1);
  w.F64(info.mu2);
  w.F64(info.eps);
  if (op.IsFactored())
  {
    w.Matrix(op.p());
    w.Matrix(op.q());
  }
  else
  {
    w.Matrix(op.ToDense());
  }
  const std::uint64_t sum = Fnv1a64(w.bytes());
  w.U64(sum);
  return std::move(w.bytes());
}

DmdFluxOperator DeserializeOperator(std::string_view bytes)
{
  Require(bytes.size() >= kMagic.size() && bytes.substr(0, kMagic.size()) == kMagic,
          ErrorKind::Format, "not an operator file");
  Reader r(bytes.substr(kMagic.size()));
  const std::uint32_t version = r.U32();
  Require(version == kOperatorFormatVersion, ErrorKind::Format,
          "unsupported operator file version " + std::to_string(version));
  const std::uint32_t kind = r.U32();
  Require(kind == kFactored || kind == kDense, ErrorKind::Format,
          "unknown operator payload kind " + std::to_string(kind));
  OperatorInfo info;
  info.layout.num_interface = static_cast<int>(r.U32());
  const std::uint32_t size = r.U32();
  info.rank = static_cast<int>(r.U32());
  info.layout.patch_size = static_cast<int>(r.U32());
  info.layout.grid_n = static_cast<int>(r.U32());
  info.mu1 = r.F64();
  info.mu2 = r.F64();
  info.eps = r.F64();
  Require(info.layout.num_interface > 0 && info.layout.patch_size > 0 &&
              size == static_cast<std::uint32_t>(info.layout.Size()),
          ErrorKind::Format, "operator file header is inconsistent");
  const auto ng = static_cast<std::uint32_t>(info.layout.num_interface);
  const auto k = static_cast<std::uint32_t>(info.rank);
  Eigen::MatrixXd a, p, q;
  if (kind == kFactored)
  {
    p = r.Matrix(ng, k);
    q = r.Matrix(k, size);
  }
  else
  {
    a = r.Matrix(ng, size);
  }
  const std::size_t body = kMagic.size() + r.pos();
  const std::uint64_t stored = r.U64();
  Require(body + 8 == bytes.size(), ErrorKind::Format, "operator file has trailing bytes");
  Require(stored == Fnv1a64(bytes.substr(0, body)), ErrorKind::Format,
          "operator file checksum mismatch");
  return kind == kFactored ? DmdFluxOperator::Factored(info, std::move(p), std::move(q))
                           : DmdFluxOperator::Dense(info, std::move(a));
}

void SaveOperator(const DmdFluxOperator &op, const std::filesystem::path &path)
{
  const std::string bytes = SerializeOperator(op);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  Require(static_cast<bool>(out), ErrorKind::Io, "write to " + path.string() + " failed");
}

DmdFluxOperator LoadOperator(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return DeserializeOperator(bytes);
}

}  // namespace partflux
