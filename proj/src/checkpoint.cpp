//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/neural/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "molrl/error.hpp"

namespace molrl {
namespace {

constexpr std::string_view kMagic("MRLCKPT\0", 8);

void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put_text(std::string &out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::string_view take(std::size_t n) {
    if (data_.size() - pos_ < n) throw DataError("truncated checkpoint");
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[i]))
           << (8 * i);
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }
  std::string_view text() { return take(u32()); }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string checkpoint_bytes(const ModelParams<float> &params,
                             const Vocabulary &vocab) {
  check_shapes(params);
  if (vocab.size() != params.dims.vocab)
    throw std::invalid_argument("vocabulary size does not match model");
  std::string out(kMagic);
  put_u32(out, kCheckpointVersion);
  const ModelDims &d = params.dims;
  for (int v : {d.vocab, d.embed, d.hidden, d.layers})
    put_u32(out, static_cast<std::uint32_t>(v));
  put_text(out, vocab.to_text());
  put_u32(out, static_cast<std::uint32_t>(3 + 3 * d.layers));
  for_each_array(params, [&out](const std::string &name, const auto &m) {
    put_text(out, name);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        put_u32(out, std::bit_cast<std::uint32_t>(m(i, j)));
  });
  return out;
}

Checkpoint parse_checkpoint(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(kMagic.size()) != kMagic) throw DataError("not a checkpoint");
  if (in.u32() != kCheckpointVersion)
    throw DataError("unsupported checkpoint version");
  ModelDims d;
  d.vocab = static_cast<int>(in.u32());
  d.embed = static_cast<int>(in.u32());
  d.hidden = static_cast<int>(in.u32());
  d.layers = static_cast<int>(in.u32());
  if (d.vocab <= 0 || d.embed <= 0 || d.hidden <= 0 || d.layers <= 0 ||
      d.hidden > (1 << 16) || d.embed > (1 << 16) || d.layers > 64)
    throw DataError("bad checkpoint dimensions");
  Checkpoint ck{zero_params<float>(d), Vocabulary::from_text(in.text())};
  if (ck.vocab.size() != d.vocab)
    throw DataError("checkpoint vocabulary does not match dimensions");
  if (in.u32() != static_cast<std::uint32_t>(3 + 3 * d.layers))
    throw DataError("unexpected array count");
  for_each_array(ck.params, [&in](const std::string &name, auto &m) {
    if (in.text() != name) throw DataError("unexpected array " + name);
    if (in.u32() != m.rows() || in.u32() != m.cols())
      throw DataError("shape mismatch in array " + name);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = in.f32();
  });
  if (!in.at_end()) throw DataError("trailing bytes in checkpoint");
  return ck;
}

void save_checkpoint(const std::filesystem::path &path,
                     const ModelParams<float> &params,
                     const Vocabulary &vocab) {
  const std::string bytes = checkpoint_bytes(params, vocab);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace molrl
