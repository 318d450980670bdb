#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wug/numerics/rng.hpp"
#include "wug/numerics/tensor.hpp"

namespace wug::num {

// A named trainable tensor.
struct Parameter {
  std::string name;
  Tensor value;
};

// d(loss)/d(parameter) for every parameter reached by a backward sweep.
class ParamGrads {
 public:
  // nullptr when the parameter was not reached.
  const Tensor* find(const Parameter& p) const;
  // Gradient of `p`, all zeros when it was not reached.
  Tensor get(const Parameter& p) const;
  Tensor& slot(const Parameter& p);
  std::size_t size() const { return grads_.size(); }

 private:
  std::unordered_map<const Parameter*, Tensor> grads_;
};

enum class OpKind : std::uint8_t {
  kConstant,
  kParameter,
  kMatMul,
  kTranspose,
  kAdd,
  kSub,
  kMul,
  kScale,
  kConcatCols,
  kConcatRows,
  kSliceCols,
  kSliceRows,
  kTanh,
  kSigmoid,
  kSoftmax,
  kLog,
  kLogSoftmax,
  kEmbedding,
  kDropout,
  kSum,
  kPick,
};

const char* op_name(OpKind kind);

// Handle to a value recorded on a Tape. Only meaningful for the tape that
// created it and only until that tape is cleared.
struct Var {
  std::uint32_t id = UINT32_MAX;
  bool valid() const { return id != UINT32_MAX; }
};

// Records primitive operations in execution order so that a single reverse
// sweep can propagate adjoints. Not thread-safe; one tape per worker.
//
// With record_gradients == false the tape only keeps forward values, which is
// what decoding and scoring use.
class Tape {
 public:
  explicit Tape(bool record_gradients = true) : record_(record_gradients) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  bool recording() const { return record_; }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  Var constant(Tensor value);
  // The parameter must outlive the tape.
  Var parameter(const Parameter& p);

  Var matmul(Var a, Var b);
  Var transpose(Var a);
  // `b` is either the same shape as `a` or a single row broadcast over a's rows.
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double factor);
  Var concat_cols(std::span<const Var> parts);
  Var concat_rows(std::span<const Var> parts);
  Var slice_cols(Var a, std::size_t begin, std::size_t end);
  Var slice_rows(Var a, std::size_t begin, std::size_t end);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var softmax(Var a);      // over the last axis, row by row
  Var log(Var a);
  Var log_softmax(Var a);  // over the last axis, row by row
  // One row of `table` per id.
  Var embedding(const Parameter& table, std::span<const int> ids);
  // Inverted dropout: kept units are scaled by 1/(1-p).
  Var dropout(Var a, double p, Rng& rng);
  Var sum(Var a);
  Var pick(Var a, std::size_t row, std::size_t col);

  // Generic entry point for the operand-only primitives.
  Var apply(OpKind kind, std::span<const Var> inputs);

  const Tensor& value(Var v) const { return node(v).value; }
  // Adjoint of `v` after backward(); zero-sized if v was not reached.
  const Tensor& grad(Var v) const { return node(v).grad; }
  OpKind kind(Var v) const { return node(v).kind; }
  std::span<const std::uint32_t> inputs(Var v) const { return node(v).inputs; }

  // Reverse sweep from a scalar loss; visits every recorded node at most once.
  // Parameters recorded more than once get the sum of their contributions.
  ParamGrads backward(Var loss);

 private:
  struct Node {
    OpKind kind = OpKind::kConstant;
    Tensor value;
    Tensor grad;
    std::vector<std::uint32_t> inputs;
    bool requires_grad = false;
    const Parameter* param = nullptr;
    std::vector<int> ids;
    Tensor mask;
    std::size_t begin = 0;
    std::size_t end = 0;
    double factor = 1.0;
  };

  const Node& node(Var v) const;
  Node& node(Var v);
  Var push(Node n);
  bool needs(std::span<const std::uint32_t> ids) const;
  Tensor& grad_buffer(std::uint32_t id);
  void backward_node(std::uint32_t id, ParamGrads& out);

  bool record_;
  std::vector<Node> nodes_;
};

}  // namespace wug::num
