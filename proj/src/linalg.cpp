#include "lbsr/linalg.hpp"

namespace lbsr {

WeightedEmbedding weighted_embedding(const Eigen::VectorXd& weights) {
  if (weights.size() == 0 || !(weights.array() > 0.0).all())
    throw Error(ErrorKind::parameter, "embedding weights must be positive");
  return {weights.cwiseSqrt()};
}

}  // namespace lbsr
