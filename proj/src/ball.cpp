#include "pcell/ball.hpp"

namespace pcell {

std::vector<Ball> subballs(const PrimeConfig& cfg, const Ball& b, long depth, std::size_t cap) {
    if (b.is_point()) throw domain_error("subballs: point ball has no subballs");
    if (depth < 1) throw domain_error("subballs: depth must be >= 1");
    double count = 1;
    for (long i = 0; i < depth; ++i) {
        count *= cfg.p;
        if (count > static_cast<double>(cap))
            throw enumeration_limit_error("subballs: p^depth exceeds enumeration cap");
    }
    long gamma = b.radius().finite();
    BigInt n = cfg.pow(depth);
    std::vector<Ball> out;
    out.reserve(static_cast<std::size_t>(count));
    for (BigInt r = 0; r < n; ++r) {
        PAdic shift(cfg, r, gamma);
        out.emplace_back(cfg, add(cfg, b.center(), shift), Valuation(gamma + depth));
    }
    return out;
}

}  // namespace pcell
