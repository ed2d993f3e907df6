#ifndef TWRI_DATASET_HPP_
#define TWRI_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "twri/image.hpp"

namespace twri {

struct PairLabel {
  std::string wall;          // dielectric | reinforced | airgap | glass | wood | none
  double aspect_deg = 0.0;
  int frame = 0;
  int realization = 0;       // index eta of the channel sample
  int subject = 0;           // wideband subject index
};

/// Paired clean (free-space) and corrupt (through-wall) images of the same
/// scene; pair i is the same scene under the two channels.
struct Dataset {
  std::vector<FrontalImage> clean;
  std::vector<FrontalImage> corrupt;
  std::vector<PairLabel> labels;

  std::size_t size() const { return clean.size(); }
  void push(FrontalImage cl, FrontalImage co, PairLabel lb);
  void validate() const;  // throws on broken pairing or mixed rasters
};

/// Deterministic shuffled split; |train| = round(fraction * M), pairs stay
/// paired. Throws if M < 2.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double fraction,
                                          std::uint64_t seed);

/// Writes images as .arr files under dir plus a manifest.json index.
void save_dataset(const std::string& dir, const Dataset& ds);
Dataset load_dataset(const std::string& dir);

}  // namespace twri

#endif  // TWRI_DATASET_HPP_
