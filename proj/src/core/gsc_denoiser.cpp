#include "core/gsc_denoiser.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace gscir {

double compute_tau(double lambda, double mu, long n_groups, const GroupGeometry& geom,
                   long n_pixels) {
  if (mu <= 0.0 || n_pixels <= 0)
    throw std::invalid_argument("compute_tau: mu and n_pixels must be positive");
  if (lambda < 0.0 || n_groups <= 0)
    throw std::invalid_argument("compute_tau: bad lambda or group count");
  double k = double(n_groups) * double(geom.group_size) * double(geom.patch_dim());
  return lambda * k / (mu * double(n_pixels));
}

DenoisePlaneResult denoise_plane(const Plane& r, const DenoiserParams& params) {
  const int h = int(r.rows()), w = int(r.cols());
  const auto refs = extract_reference_positions(h, w, params.geom);
  const int n = int(refs.size());

  int threads = params.threads > 0 ? params.threads
                                   : int(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);

  std::vector<PatchGroup> groups(static_cast<size_t>(n));
  std::vector<Eigen::VectorXd> spectra(static_cast<size_t>(n));

  // Chunked: workers fill per-group slots, aggregation happens serially in
  // index order, so results are identical for any thread count.
  const int chunk = 512;
  Plane sum = Plane::Zero(h, w);
  Plane count = Plane::Zero(h, w);
  for (int base = 0; base < n; base += chunk) {
    const int end = std::min(base + chunk, n);
    auto work = [&](int t0) {
      for (int i = base + t0; i < end; i += threads) {
        PatchGroup g = block_match(r, refs[size_t(i)], params.geom);
        SvProxResult d = denoise_group(g.data, params.tau, params.relax, params.inner_iters);
        g.data = std::move(d.x);
        spectra[size_t(i)] = std::move(d.spectrum.values);
        groups[size_t(i)] = std::move(g);
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(size_t(threads));
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    const int side = params.geom.patch_side;
    for (int i = base; i < end; ++i) {
      const auto& g = groups[size_t(i)];
      for (size_t j = 0; j < g.origins.size(); ++j) {
        auto [r0, c0] = g.origins[j];
        int k = 0;
        for (int pc = 0; pc < side; ++pc)
          for (int pr = 0; pr < side; ++pr) {
            sum(r0 + pr, c0 + pc) += g.data(k++, Eigen::Index(j));
            count(r0 + pr, c0 + pc) += 1.0;
          }
      }
      groups[size_t(i)].data.resize(0, 0);  // release before the next chunk
    }
  }

  if ((count.array() == 0.0).any())
    throw std::runtime_error("denoise_plane: uncovered pixel, geometry is broken");

  DenoisePlaneResult out;
  out.image = sum.array() / count.array();
  out.spectra = std::move(spectra);
  return out;
}

Image denoise_image(const Image& r, const DenoiserParams& params) {
  std::vector<Plane> planes;
  planes.reserve(size_t(r.channels()));
  for (int ch = 0; ch < r.channels(); ++ch)
    planes.push_back(denoise_plane(r.plane(ch), params).image);
  return Image(std::move(planes));
}

}  // namespace gscir
