#include "villi/simulator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace villi {

bool stick_covers(const Stick& stick, int x, int y) {
  const double theta = stick.angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double dx = x - stick.center_x;
  const double dy = y - stick.center_y;
  const double along = dx * c + dy * s;
  const double across = -dx * s + dy * c;
  return std::abs(along) <= stick.length / 2.0 &&
         std::abs(across) <= stick.width / 2.0;
}

Stick sample_stick(Rng& rng, ImageSize size) {
  if (size.width < kMinSimulatedImageSide ||
      size.height < kMinSimulatedImageSide) {
    throw std::invalid_argument(
        "sample_stick: image size must be at least " +
        std::to_string(kMinSimulatedImageSide) + " per side");
  }
  Stick stick;
  stick.width = rng.uniform_int(kStickWidthMin, kStickWidthMax);
  stick.length = rng.uniform_int(kStickLengthMin, kStickLengthMax);
  stick.angle_deg = rng.uniform_real(0.0, 180.0);
  stick.center_x = rng.uniform_real(0.0, static_cast<double>(size.width));
  stick.center_y = rng.uniform_real(0.0, static_cast<double>(size.height));
  stick.brightness = 255;
  return stick;
}

MaskImage rasterize(std::span<const Stick> sticks, ImageSize size) {
  MaskImage mask(size.width, size.height);
  for (const Stick& stick : sticks) {
    // Only the stick's bounding circle needs scanning; anything outside
    // the image is the silent clip.
    const double r = 0.5 * std::hypot(static_cast<double>(stick.length),
                                      static_cast<double>(stick.width));
    const int x0 = std::max(0, static_cast<int>(std::ceil(stick.center_x - r)));
    const int x1 = std::min(size.width - 1,
                            static_cast<int>(std::floor(stick.center_x + r)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(stick.center_y - r)));
    const int y1 = std::min(size.height - 1,
                            static_cast<int>(std::floor(stick.center_y + r)));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (stick_covers(stick, x, y)) mask.at(x, y) = 1;
  }
  mask.sticks = std::vector<Stick>(sticks.begin(), sticks.end());
  return mask;
}

MaskImage simulate_mask(int count, ImageSize size, Rng& rng) {
  if (count < 0)
    throw std::invalid_argument("simulate_mask: negative stick count");
  std::vector<Stick> sticks;
  sticks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) sticks.push_back(sample_stick(rng, size));
  return rasterize(sticks, size);
}

int sample_macro_count(const CountDistribution& dist, Rng& rng) {
  if (dist.low > dist.high)
    throw std::invalid_argument("sample_macro_count: low > high");
  return rng.uniform_int(dist.low, dist.high);
}

void write_sticks_jsonl(const std::filesystem::path& path,
                        std::span<const Stick> sticks) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  for (const Stick& s : sticks) {
    nlohmann::json j{{"cx", s.center_x},       {"cy", s.center_y},
                     {"angle_deg", s.angle_deg}, {"width", s.width},
                     {"length", s.length},     {"brightness", s.brightness}};
    out << j.dump() << '\n';
  }
}

std::vector<Stick> read_sticks_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  std::vector<Stick> sticks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    Stick s;
    s.center_x = j.at("cx").get<double>();
    s.center_y = j.at("cy").get<double>();
    s.angle_deg = j.at("angle_deg").get<double>();
    s.width = j.at("width").get<int>();
    s.length = j.at("length").get<int>();
    s.brightness = j.at("brightness").get<int>();
    sticks.push_back(s);
  }
  return sticks;
}

}  // namespace villi
