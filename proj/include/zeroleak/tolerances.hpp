#ifndef ZEROLEAK_TOLERANCES_HPP_
#define ZEROLEAK_TOLERANCES_HPP_

namespace zeroleak {

struct Tolerances {
  double prob = 1e-9;     // stochasticity checks
  double lp = 1e-9;       // LP feasibility residuals
  double vertex = 1e-8;   // vertex deduplication, infinity norm
  double rank = 1e-10;    // row-reduction pivot threshold
  double ent = 1e-7;      // entropy equalities, bits
};

}  // namespace zeroleak

#endif  // ZEROLEAK_TOLERANCES_HPP_
