#include "villi/evaluate.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace villi {

MaskImage dilate_to_width(const CenterlineAnnotation& ann, int w) {
  if (w < kMinDilationWidth || w > kMaxDilationWidth)
    throw std::invalid_argument("dilate_to_width: w must be in [1, 5]");
  const MaskImage& src = ann.pixels;
  if (w == 1) return src;

  const double radius = (w - 1) / 2.0;
  const int reach = static_cast<int>(radius);
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -reach; dy <= reach; ++dy)
    for (int dx = -reach; dx <= reach; ++dx)
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);

  MaskImage out(src.width, src.height);
  for (int y = 0; y < src.height; ++y)
    for (int x = 0; x < src.width; ++x) {
      if (!src.at(x, y)) continue;
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx, ny = y + dy;
        if (nx >= 0 && nx < src.width && ny >= 0 && ny < src.height)
          out.at(nx, ny) = 1;
      }
    }
  return out;
}

double dice_score(const MaskImage& pred, const MaskImage& gt) {
  if (!pred.same_shape(gt))
    throw std::invalid_argument("dice_score: shape mismatch");
  long long inter = 0, p = 0, g = 0;
  for (std::size_t i = 0; i < pred.pixels.size(); ++i) {
    const bool a = pred.pixels[i] != 0;
    const bool b = gt.pixels[i] != 0;
    inter += a && b;
    p += a;
    g += b;
  }
  if (p + g == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(p + g);
}

DiceReportRow evaluate(std::span<const MaskImage> preds,
                       std::span<const CenterlineAnnotation> anns,
                       std::span<const int> widths) {
  if (preds.size() != anns.size())
    throw std::invalid_argument("evaluate: preds/annotations length mismatch");
  if (preds.empty()) throw std::invalid_argument("evaluate: no frames");
  if (widths.empty()) throw std::invalid_argument("evaluate: no widths");

  DiceReportRow row;
  row.widths.assign(widths.begin(), widths.end());
  for (const int w : widths) {
    std::vector<double> frame_dice;
    frame_dice.reserve(preds.size());
    for (std::size_t f = 0; f < preds.size(); ++f)
      frame_dice.push_back(dice_score(preds[f], dilate_to_width(anns[f], w)));
    double sum = 0.0;
    for (const double d : frame_dice) sum += d;
    row.mean_dice.push_back(sum / static_cast<double>(frame_dice.size()));
    row.per_frame.push_back(std::move(frame_dice));
  }
  return row;
}

void DiceReport::write_csv(const std::filesystem::path& path) const {
  if (rows.empty())
    throw std::invalid_argument("DiceReport::write_csv: empty report");
  const std::vector<int>& widths = rows.front().widths;
  for (const DiceReportRow& row : rows)
    if (row.widths != widths)
      throw std::invalid_argument(
          "DiceReport::write_csv: rows disagree on width columns");

  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());

  out << "experiment_id,matching,smooth,noise,brightness";
  for (const int w : widths) out << ",D_w" << w;
  out << "\n";
  char buf[32];
  for (const DiceReportRow& row : rows) {
    out << row.experiment_id << ',' << row.matching << ',' << int(row.smooth)
        << ',' << int(row.noise) << ',' << int(row.brightness);
    for (const double d : row.mean_dice) {
      std::snprintf(buf, sizeof(buf), ",%.6f", d);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace villi
