#ifndef NHP_NIKISHIN_HPP
#define NHP_NIKISHIN_HPP

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

#include "nhp/measure.hpp"

namespace nhp {

enum class Orientation { Forward, Reversed };

// A system of generating measures over a valid interval chain, together with
// all nested products in both orientations:
//   s(j,k), j <= k : <sigma_j, ..., sigma_k>   (supported on Delta_j)
//   s(k,j), k >= j : <sigma_k, ..., sigma_j>   (supported on Delta_k)
// Indices are 1-based throughout, matching the s_{j,k} bookkeeping.
// Immutable after build; the unweighted moment cache is write-once per key
// behind a mutex, so concurrent readers are fine.
template <class S>
class NikishinSystem {
 public:
  static NikishinSystem build(std::vector<Measure<S>> generators) {
    if (generators.empty()) throw ConfigError("NikishinSystem: no generators");
    const int m = static_cast<int>(generators.size());
    for (int j = 0; j + 1 < m; ++j) {
      auto meet = classify_meet(generators[j].support(), generators[j + 1].support());
      if (meet.kind == IntervalMeet<S>::Overlap) {
        std::ostringstream os;
        os << "NikishinSystem: supports of generators " << (j + 1) << " and " << (j + 2)
           << " overlap in more than one point";
        throw ConfigError(os.str());
      }
      if (meet.kind == IntervalMeet<S>::SinglePoint) {
        const S& pt = *meet.point;
        if (generators[j].has_atom_at(pt) || generators[j + 1].has_atom_at(pt))
          throw ConfigError("NikishinSystem: shared support endpoint is a mass point");
      }
      if (generators[j].size() < 2 || generators[j + 1].size() < 2)
        throw ConfigError("NikishinSystem: generators need >= 2 atoms");
    }
    NikishinSystem sys;
    sys.m_ = m;
    sys.gen_ = std::move(generators);

    // forward: s_{j,k} = <sigma_j, s_{j+1,k}>, built right to left
    sys.fwd_.assign(m, {});
    for (int j = m; j >= 1; --j) {
      auto& row = sys.fwd_[j - 1];
      row.reserve(m - j + 1);
      row.push_back(sys.gen_[j - 1]);  // s_{j,j}
      for (int k = j + 1; k <= m; ++k)
        row.push_back(product_measure(sys.gen_[j - 1], sys.fwd_[j][k - j - 1]));
      for (int k = j; k <= m; ++k) {
        std::ostringstream nm;
        nm << "s[" << j << "," << k << "]";
        row[k - j] = renamed(row[k - j], nm.str());
      }
    }
    // reversed: s_{k,j} = <sigma_k, s_{k-1,j}>, built left to right
    sys.rev_.assign(m, {});
    for (int k = 1; k <= m; ++k) {
      auto& row = sys.rev_[k - 1];
      row.reserve(k);
      row.push_back(sys.gen_[k - 1]);  // s_{k,k}
      for (int j = k - 1; j >= 1; --j)
        row.push_back(product_measure(sys.gen_[k - 1], sys.rev_[k - 2][k - 1 - j]));
      for (int j = k; j >= 1; --j) {
        std::ostringstream nm;
        nm << "s[" << k << "," << j << "]";
        row[k - j] = renamed(row[k - j], nm.str());
      }
    }
    return sys;
  }

  int size() const { return m_; }

  const Measure<S>& generator(int j) const {
    check_index(j);
    return gen_[j - 1];
  }
  const Interval<S>& delta(int j) const { return generator(j).support(); }

  // s(j,k): forward product for j <= k, reversed for j > k.
  const Measure<S>& s(int j, int k) const {
    check_index(j);
    check_index(k);
    if (j <= k) return fwd_[j - 1][k - j];
    return rev_[j - 1][j - k];
  }

  // unweighted moments of s(j,k), extended on demand (write-once per order)
  VecX<S> cached_moments(int j, int k, int count) const {
    std::scoped_lock lk(cache_->mu);
    auto& slot = cache_->map[{j, k}];
    if (static_cast<int>(slot.size()) < count) {
      VecX<S> full = moments(s(j, k), count);
      slot.assign(full.data(), full.data() + full.size());
    }
    VecX<S> out(count);
    for (int i = 0; i < count; ++i) out[i] = slot[i];
    return out;
  }

 private:
  static Measure<S> renamed(const Measure<S>& msr, std::string name) {
    return Measure<S>(msr.atoms(), msr.support(), msr.provenance(), std::move(name));
  }
  void check_index(int j) const {
    if (j < 1 || j > m_) throw std::out_of_range("NikishinSystem: index out of range");
  }

  struct Cache {
    std::mutex mu;
    std::map<std::pair<int, int>, std::vector<S>> map;
  };

  int m_ = 0;
  std::vector<Measure<S>> gen_;
  std::vector<std::vector<Measure<S>>> fwd_, rev_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Build with the stated generator order, or with the order reversed (the
// reversed tuple generates a system of its own whenever the forward one does).
template <class S>
NikishinSystem<S> build_system(std::vector<Measure<S>> generators, Orientation o = Orientation::Forward) {
  if (o == Orientation::Reversed) std::reverse(generators.begin(), generators.end());
  return NikishinSystem<S>::build(std::move(generators));
}

}  // namespace nhp

#endif  // NHP_NIKISHIN_HPP
