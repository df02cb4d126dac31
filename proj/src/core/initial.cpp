#include <cmath>

#include "phnls/config.hpp"

namespace phnls {

GridPtr make_grid(const RunConfig& c) { return Grid::create(c.n_y, c.box_len, c.n_h, c.quad_count); }

Field make_initial(const RunConfig& c, GridPtr grid) {
  Field out(grid);
  if (c.initial_kind == "file") {
    out = read_snapshot(c.initial_file, grid->quad_count());
    if (!out.grid().same_shape(*grid) || out.grid().box_len() != grid->box_len())
      fail(ErrorCode::invalid_argument, "snapshot " + c.initial_file + " does not match the configured grid");
  } else if (c.initial_kind == "mode") {
    const int n = grid->n_y();
    const int a = (c.mode_k1 % n + n) % n, b = (c.mode_k2 % n + n) % n;
    out.at(a, b, c.mode_n) = c.amplitude * grid->box_len();
  } else {
    const double k1 = 2.0 * kPi * c.xi1 / grid->box_len();
    const double k2 = 2.0 * kPi * c.xi2 / grid->box_len();
    const int mode = c.mode_n;
    const double w2 = c.width * c.width;
    out = from_sampler(grid, [&](double y1, double y2, double x) {
      const double d1 = y1 - c.center_y1, d2 = y2 - c.center_y2;
      return c.amplitude * std::exp(-(d1 * d1 + d2 * d2) / w2) * eval_hermite(mode, x) *
             std::polar(1.0, k1 * y1 + k2 * y2);
    });
    apply_dealias(out);
  }
  if (c.noise > 0.0) {
    SplitMix64 rng(c.seed);
    for (int m = 0; m < grid->n_h(); ++m)
      for (std::size_t i = 0; i < grid->points(); ++i) {
        const double re = 2.0 * rng.uniform() - 1.0;
        const double im = 2.0 * rng.uniform() - 1.0;
        if (grid->in_mask(i)) out.coeffs()[m * grid->points() + i] += c.noise * cplx(re, im);
      }
  }
  out.set_time(0.0);
  return out;
}

}  // namespace phnls
