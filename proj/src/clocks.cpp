#include "treepack/clocks.hpp"

#include <algorithm>
#include <stdexcept>

namespace treepack {

ClockStore::ClockStore(int n, Backend backend, std::uint64_t label_seed)
    : n_(n), backend_(backend), label_seed_(label_seed), dense_(n <= kDenseClockLimit) {
  if (n < 1) throw std::invalid_argument("ClockStore: need n >= 1");
  if (dense_) dense_edges_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, Edge{});
}

const ClockStore::Edge* ClockStore::find(int u, int w) const {
  if (dense_) return &dense_edges_[tri_index(u, w)];
  auto it = sparse_edges_.find(key(u, w));
  return it == sparse_edges_.end() ? nullptr : &it->second;
}

ClockStore::Edge& ClockStore::touch(int u, int w) {
  if (dense_) return dense_edges_[tri_index(u, w)];
  return sparse_edges_[key(u, w)];
}

double ClockStore::hidden_label(int u, int w, const Edge* e) const {
  if (e != nullptr && e->label_forced) return e->label;
  return edge_label_u01(label_seed_, u, w);
}

double ClockStore::clock(int u, int w) const {
  const Edge* e = find(u, w);
  return e == nullptr ? 0.0 : e->c;
}

bool ClockStore::rung(int u, int w) const {
  const Edge* e = find(u, w);
  return e != nullptr && e->rung;
}

double ClockStore::label(int u, int w) const {
  const Edge* e = find(u, w);
  if (e != nullptr && e->rung) return e->label;
  if (backend_ != Backend::eager) {
    throw std::logic_error("ClockStore::label: lazy backend has no label for unrung edges");
  }
  return hidden_label(u, w, e);
}

double ClockStore::entry_time(int u, int w) const {
  if (backend_ != Backend::eager) {
    throw std::logic_error("ClockStore::entry_time: eager backend only");
  }
  const Edge* e = find(u, w);
  const double c = e == nullptr ? 0.0 : e->c;
  const double t = hidden_label(u, w, e);
  return (t - c) / (1.0 - c);
}

void ClockStore::advance(int u, int w, double tau) {
  if (tau <= 0.0) return;
  Edge& e = touch(u, w);
  if (e.rung) return;
  double next = e.c + (1.0 - e.c) * tau;
  if (backend_ == Backend::eager) {
    next = std::min(next, hidden_label(u, w, &e));
  }
  e.c = next;
  max_clock_ = std::max(max_clock_, e.c);
}

void ClockStore::ring(int u, int w, double lab) {
  Edge& e = touch(u, w);
  if (e.rung) throw std::logic_error("ClockStore::ring: edge already used");
  e.rung = true;
  e.label = lab;
  e.c = lab;
  max_clock_ = std::max(max_clock_, e.c);
  ++rung_count_;
}

void ClockStore::force_label(int u, int w, double t) {
  if (backend_ != Backend::eager) throw std::logic_error("force_label: eager backend only");
  Edge& e = touch(u, w);
  e.label_forced = true;
  e.label = t;
}

}  // namespace treepack
