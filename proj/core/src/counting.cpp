#include "villi/counting.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace villi {

ThresholdMethod ThresholdMethod::fixed(int value) {
  if (value < 0 || value > 255)
    throw std::invalid_argument("ThresholdMethod: fixed value out of [0,255]");
  return {Kind::kFixed, value};
}

GrayImage extract_tip_channel(const FluorescenceFrame& frame) {
  if (!frame.channels_consistent())
    throw std::invalid_argument("extract_tip_channel: channel shapes differ");
  GrayImage out(frame.width(), frame.height());
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const int g = frame.green.pixels[i];
    const int rb = std::max(frame.red.pixels[i], frame.blue.pixels[i]);
    out.pixels[i] = static_cast<std::uint8_t>(std::max(0, g - rb));
  }
  return out;
}

int otsu_threshold(const GrayImage& img) {
  std::array<std::size_t, 256> hist{};
  for (std::uint8_t v : img.pixels) ++hist[v];
  const double total = static_cast<double>(img.pixels.size());
  if (total == 0.0) return 0;

  double sum_all = 0.0;
  for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

  // Running moments of the "<= t" class; pick the smallest argmax of the
  // between-class variance.
  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    w0 += static_cast<double>(hist[t]);
    sum0 += static_cast<double>(t) * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

MaskImage binarize(const GrayImage& img, const ThresholdMethod& method) {
  const int t = method.kind == ThresholdMethod::Kind::kOtsu
                    ? otsu_threshold(img)
                    : method.fixed_value;
  MaskImage mask(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    mask.pixels[i] = img.pixels[i] > t ? 1 : 0;
  return mask;
}

CountEstimate count_components(const MaskImage& mask, int min_area) {
  if (min_area < 1)
    throw std::invalid_argument("count_components: min_area must be >= 1");
  const int w = mask.width, h = mask.height;
  std::vector<std::uint8_t> visited(mask.pixels.size(), 0);
  std::vector<int> stack;
  int count = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int idx = y * w + x;
      if (!mask.pixels[idx] || visited[idx]) continue;
      // Flood one 8-connected component.
      int area = 0;
      visited[idx] = 1;
      stack.push_back(idx);
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        ++area;
        const int cx = cur % w, cy = cur / w;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const int nidx = ny * w + nx;
            if (mask.pixels[nidx] && !visited[nidx]) {
              visited[nidx] = 1;
              stack.push_back(nidx);
            }
          }
        }
      }
      if (area >= min_area) ++count;
    }
  }
  return CountEstimate{count, 0, min_area};
}

CountEstimate estimate_count(const FluorescenceFrame& frame,
                             const ThresholdMethod& method, int min_area) {
  const GrayImage tips = extract_tip_channel(frame);
  const int t = method.kind == ThresholdMethod::Kind::kOtsu
                    ? otsu_threshold(tips)
                    : method.fixed_value;
  const MaskImage mask = binarize(tips, ThresholdMethod::fixed(t));
  CountEstimate est = count_components(mask, min_area);
  est.threshold_used = t;
  return est;
}

std::map<std::string, int> read_counts_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open counts file: " + path.string());
  std::map<std::string, int> counts;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty counts file: " + path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    if (c1 == std::string::npos)
      throw std::runtime_error("malformed counts row: " + line);
    const auto c2 = line.find(',', c1 + 1);
    const std::string value =
        line.substr(c1 + 1, c2 == std::string::npos ? c2 : c2 - c1 - 1);
    try {
      counts[line.substr(0, c1)] = std::stoi(value);
    } catch (const std::exception&) {
      throw std::runtime_error("malformed count value in row: " + line);
    }
  }
  return counts;
}

}  // namespace villi
