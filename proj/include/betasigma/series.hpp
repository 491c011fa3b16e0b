#pragma once

#include <optional>
#include <vector>

namespace betasigma {

/// A sampled series. Positions are optional; when absent the data live on the
/// implicit equidistant grid t_i = i.
struct SeriesData {
  std::optional<std::vector<double>> t;
  std::vector<double> y;

  std::size_t size() const { return y.size(); }
  bool has_positions() const { return t.has_value(); }
};

}  // namespace betasigma
