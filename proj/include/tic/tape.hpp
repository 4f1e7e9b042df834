#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tic/errors.hpp"
#include "tic/tensor.hpp"

namespace tic {

// Ordered record of executed operations. Each node's closure owns the saved
// intermediates it needs and maps the gradient w.r.t. the node's output to
// the gradient w.r.t. its input, accumulating parameter gradients as a side
// effect. backward() replays nodes in exact reverse execution order and may
// run once per tape.
template <typename T>
class GradTape {
 public:
  using BackwardFn = std::function<Tensor4<T>(const Tensor4<T>&)>;

  void record(std::string name, BackwardFn fn) {
    if (consumed_) throw TapeError("record after backward on tape");
    nodes_.push_back({std::move(name), std::move(fn)});
  }

  Tensor4<T> backward(Tensor4<T> grad_out) {
    if (consumed_) throw TapeError("tape backward invoked twice");
    if (nodes_.empty()) throw TapeError("backward on empty tape");
    consumed_ = true;
    Tensor4<T> g = std::move(grad_out);
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
      if (!it->fn) throw TapeError("tape node '" + it->name + "' has no saved state");
      g = it->fn(g);
    }
    return g;
  }

  bool consumed() const { return consumed_; }
  std::size_t size() const { return nodes_.size(); }
  const std::string& name(std::size_t i) const { return nodes_[i].name; }

 private:
  struct Node {
    std::string name;
    BackwardFn fn;
  };
  std::vector<Node> nodes_;
  bool consumed_ = false;
};

}  // namespace tic
