#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "credo/error.hpp"
#include "credo/nn.hpp"
#include "jsonl_util.hpp"

namespace credo::nn {
namespace {

constexpr std::array<char, 8> kMagic = {'C', 'R', 'E', 'D', 'O', 'C', 'K', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(std::string_view in, std::size_t pos) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

double get_f64(std::string_view in, std::size_t pos) {
  return std::bit_cast<double>(get_u64(in, pos));
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, std::string_view header_json,
                      const ParamList& params) {
  detail::json header = detail::json::parse(header_json);
  if (!header.is_object()) throw ConfigError("checkpoint header must be a JSON object");
  detail::json blocks = detail::json::array();
  for (const auto& p : params) blocks.push_back({{"name", p.name}, {"shape", p.shape}});
  header["blocks"] = std::move(blocks);
  std::string header_text = header.dump();

  std::string out(kMagic.begin(), kMagic.end());
  put_u64(out, header_text.size());
  out += header_text;
  for (const auto& p : params) {
    for (std::size_t i = 0; i < p.size; ++i) put_f64(out, p.data[i]);
  }
  detail::write_file(path, out);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::string raw = detail::read_file(path);
  if (raw.size() < 16 || std::memcmp(raw.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ParseError("not a checkpoint file: " + path.string(), 0);
  }
  std::uint64_t header_len = get_u64(raw, 8);
  if (16 + header_len > raw.size()) throw ParseError("truncated checkpoint header", 0);

  Checkpoint ckpt;
  ckpt.header = raw.substr(16, header_len);
  detail::json header;
  try {
    header = detail::json::parse(ckpt.header);
  } catch (const detail::json::exception& e) {
    throw ParseError(std::string("bad checkpoint header: ") + e.what(), 0);
  }
  std::size_t pos = 16 + header_len;
  for (const auto& b : header.at("blocks")) {
    CheckpointBlock block;
    block.name = b.at("name").get<std::string>();
    block.tensor = Tensor(b.at("shape").get<std::vector<std::size_t>>());
    std::size_t n = block.tensor.size();
    if (pos + 8 * n > raw.size()) throw ParseError("truncated checkpoint block " + block.name, 0);
    for (std::size_t i = 0; i < n; ++i) block.tensor.values[i] = get_f64(raw, pos + 8 * i);
    pos += 8 * n;
    block.tensor.validate();
    ckpt.blocks.push_back(std::move(block));
  }
  if (pos != raw.size()) throw ParseError("trailing bytes after checkpoint blocks", 0);
  return ckpt;
}

void load_blocks(const Checkpoint& ckpt, const ParamList& params) {
  if (ckpt.blocks.size() != params.size()) {
    throw ConfigError("checkpoint has " + std::to_string(ckpt.blocks.size()) +
                      " blocks, model expects " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& b = ckpt.blocks[i];
    if (b.name != params[i].name || b.tensor.shape != params[i].shape) {
      throw ConfigError("checkpoint block mismatch at " + params[i].name);
    }
    std::copy(b.tensor.values.begin(), b.tensor.values.end(), params[i].data);
  }
}

}  // namespace credo::nn
