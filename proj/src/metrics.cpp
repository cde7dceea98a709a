#include "glaa/metrics.hpp"

#include <stdexcept>

namespace glaa {

double dsc(const BinaryMask& cs, const BinaryMask& gt) {
    if (cs.width != gt.width || cs.height != gt.height)
        throw std::invalid_argument("dsc: dimension mismatch");
    std::size_t n_cs = 0, n_gt = 0, n_both = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        n_cs += cs.data[i] != 0;
        n_gt += gt.data[i] != 0;
        n_both += (cs.data[i] != 0) && (gt.data[i] != 0);
    }
    if (n_cs + n_gt == 0) return 1.0;  // perfect agreement on emptiness
    return 2.0 * static_cast<double>(n_both) / static_cast<double>(n_cs + n_gt);
}

double uniformity_pp(const ImageGrid& f, const BinaryMask& mask) {
    if (f.width != mask.width || f.height != mask.height)
        throw std::invalid_argument("uniformity_pp: dimension mismatch");
    const double range = max_value(f) - min_value(f);
    if (range <= 0.0) return 1.0;  // constant image
    double sum[2] = {0.0, 0.0};
    double cnt[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        const int r = mask.data[i] ? 1 : 0;
        sum[r] += f.data[i];
        cnt[r] += 1.0;
    }
    const double mean[2] = {cnt[0] > 0 ? sum[0] / cnt[0] : 0.0,
                            cnt[1] > 0 ? sum[1] / cnt[1] : 0.0};
    double ss = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f.data[i] - mean[mask.data[i] ? 1 : 0];
        ss += d * d;
    }
    const double c = static_cast<double>(f.size()) * range * range;
    return 1.0 - ss / c;
}

EvalReport evaluate(const SegmentationResult& result, const ImageGrid& f,
                    const BinaryMask* gt) {
    EvalReport report;
    report.pp = uniformity_pp(f, result.mask);
    report.iterations = result.iterations;
    report.wall_time = result.wall_time;
    if (gt) report.dsc = dsc(result.mask, *gt);
    return report;
}

}  // namespace glaa
