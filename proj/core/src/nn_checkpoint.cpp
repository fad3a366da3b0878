#include "villi/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace villi::nn {

namespace {

void write_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t read_u64(std::istream& in) {
  char buf[8];
  in.read(buf, 8);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const Checkpoint& ckpt) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  const std::string header = ckpt.header.dump();
  write_u64(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  write_u64(out, ckpt.arrays.size());
  for (const auto& [name, values] : ckpt.arrays) {
    write_u64(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u64(out, values.size());
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  char magic[sizeof(kCheckpointMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a checkpoint file: " + path.string());
  Checkpoint ckpt;
  const std::uint64_t header_len = read_u64(in);
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw std::runtime_error("checkpoint: truncated header");
  ckpt.header = nlohmann::json::parse(header);
  const std::uint64_t n_arrays = read_u64(in);
  ckpt.arrays.reserve(n_arrays);
  for (std::uint64_t i = 0; i < n_arrays; ++i) {
    const std::uint64_t name_len = read_u64(in);
    std::string name(name_len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(name_len));
    const std::uint64_t count = read_u64(in);
    std::vector<float> values(count);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (!in) throw std::runtime_error("checkpoint: truncated array data");
    ckpt.arrays.emplace_back(std::move(name), std::move(values));
  }
  return ckpt;
}

void pack_params(Checkpoint& ckpt, const std::vector<ParamView>& params) {
  for (std::size_t i = 0; i < params.size(); ++i)
    ckpt.arrays.emplace_back("p" + std::to_string(i), *params[i].value);
}

void unpack_params(const Checkpoint& ckpt,
                   const std::vector<ParamView>& params) {
  if (ckpt.arrays.size() != params.size())
    throw std::runtime_error(
        "checkpoint: parameter count does not match architecture");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, values] = ckpt.arrays[i];
    if (name != "p" + std::to_string(i) ||
        values.size() != params[i].value->size())
      throw std::runtime_error(
          "checkpoint: parameter layout does not match architecture");
    *params[i].value = values;
  }
}

}  // namespace villi::nn
