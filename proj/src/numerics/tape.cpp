#include "wug/numerics/tape.hpp"

#include <algorithm>
#include <cmath>

#include "wug/errors.hpp"

namespace wug::num {

namespace {

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected rank-2 operand, got " +
                         shape_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
  }
}

bool is_row_broadcast(const Tensor& a, const Tensor& b) {
  return b.rank() == 2 && a.rank() == 2 && b.rows() == 1 && b.cols() == a.cols() &&
         a.rows() != 1;
}

void check_finite(const Tensor& t, OpKind kind) {
  if (!t.all_finite()) {
    throw NumericError(std::string("non-finite output from ") + op_name(kind));
  }
}

void accumulate(Tensor& dst, const Tensor& src) {
  double* d = dst.data();
  const double* s = src.data();
  for (std::size_t i = 0, n = dst.size(); i < n; ++i) d[i] += s[i];
}

// out[r x c] += a[r x k] * b[k x c]
void gemm_nn(const double* a, const double* b, double* out, std::size_t r, std::size_t k,
             std::size_t c) {
  for (std::size_t i = 0; i < r; ++i) {
    double* orow = out + i * c;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += av * brow[j];
    }
  }
}

}  // namespace

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kConstant: return "constant";
    case OpKind::kParameter: return "parameter";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kConcatRows: return "concat_rows";
    case OpKind::kSliceCols: return "slice_cols";
    case OpKind::kSliceRows: return "slice_rows";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kLog: return "log";
    case OpKind::kLogSoftmax: return "log_softmax";
    case OpKind::kEmbedding: return "embedding";
    case OpKind::kDropout: return "dropout";
    case OpKind::kSum: return "sum";
    case OpKind::kPick: return "pick";
  }
  return "?";
}

const Tensor* ParamGrads::find(const Parameter& p) const {
  auto it = grads_.find(&p);
  return it == grads_.end() ? nullptr : &it->second;
}

Tensor ParamGrads::get(const Parameter& p) const {
  const Tensor* g = find(p);
  return g ? *g : Tensor(p.value.shape(), 0.0);
}

Tensor& ParamGrads::slot(const Parameter& p) {
  auto [it, inserted] = grads_.try_emplace(&p);
  if (inserted) it->second = Tensor(p.value.shape(), 0.0);
  return it->second;
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id >= nodes_.size()) throw ContractError("Var does not belong to this tape");
  return nodes_[v.id];
}

Tape::Node& Tape::node(Var v) {
  if (v.id >= nodes_.size()) throw ContractError("Var does not belong to this tape");
  return nodes_[v.id];
}

Var Tape::push(Node n) {
  check_finite(n.value, n.kind);
  nodes_.push_back(std::move(n));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

bool Tape::needs(std::span<const std::uint32_t> ids) const {
  if (!record_) return false;
  return std::any_of(ids.begin(), ids.end(),
                     [&](std::uint32_t i) { return nodes_[i].requires_grad; });
}

Var Tape::constant(Tensor value) {
  require_rank2(value, "constant");
  Node n;
  n.kind = OpKind::kConstant;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::parameter(const Parameter& p) {
  require_rank2(p.value, "parameter");
  Node n;
  n.kind = OpKind::kParameter;
  n.value = p.value;
  n.param = &p;
  n.requires_grad = record_;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  if (x.cols() != y.rows()) {
    throw DimensionError("matmul: " + shape_string(x.shape()) + " x " +
                         shape_string(y.shape()));
  }
  Node n;
  n.kind = OpKind::kMatMul;
  n.value = Tensor({x.rows(), y.cols()});
  gemm_nn(x.data(), y.data(), n.value.data(), x.rows(), x.cols(), y.cols());
  n.inputs = {a.id, b.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::transpose(Var a) {
  const Tensor& x = value(a);
  Node n;
  n.kind = OpKind::kTranspose;
  n.value = Tensor({x.cols(), x.rows()});
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) n.value.at(j, i) = x.at(i, j);
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  Node n;
  n.kind = OpKind::kAdd;
  n.value = x;
  if (is_row_broadcast(x, y)) {
    const std::size_t c = x.cols();
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < c; ++j) n.value[i * c + j] += y[j];
  } else {
    require_same_shape(x, y, "add");
    accumulate(n.value, y);
  }
  n.inputs = {a.id, b.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  require_same_shape(x, y, "sub");
  Node n;
  n.kind = OpKind::kSub;
  n.value = x;
  for (std::size_t i = 0; i < x.size(); ++i) n.value[i] -= y[i];
  n.inputs = {a.id, b.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  require_same_shape(x, y, "mul");
  Node n;
  n.kind = OpKind::kMul;
  n.value = x;
  for (std::size_t i = 0; i < x.size(); ++i) n.value[i] *= y[i];
  n.inputs = {a.id, b.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::scale(Var a, double factor) {
  Node n;
  n.kind = OpKind::kScale;
  n.value = value(a);
  for (double& v : n.value.values()) v *= factor;
  n.factor = factor;
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no operands");
  const std::size_t rows = value(parts[0]).rows();
  std::size_t cols = 0;
  for (Var p : parts) {
    if (value(p).rows() != rows) throw DimensionError("concat_cols: row count mismatch");
    cols += value(p).cols();
  }
  Node n;
  n.kind = OpKind::kConcatCols;
  n.value = Tensor({rows, cols});
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor& x = value(p);
    for (std::size_t i = 0; i < rows; ++i)
      std::copy_n(x.data() + i * x.cols(), x.cols(), n.value.data() + i * cols + offset);
    offset += x.cols();
    n.inputs.push_back(p.id);
  }
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_rows: no operands");
  const std::size_t cols = value(parts[0]).cols();
  std::size_t rows = 0;
  for (Var p : parts) {
    if (value(p).cols() != cols) throw DimensionError("concat_rows: column count mismatch");
    rows += value(p).rows();
  }
  Node n;
  n.kind = OpKind::kConcatRows;
  n.value = Tensor({rows, cols});
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor& x = value(p);
    std::copy_n(x.data(), x.size(), n.value.data() + offset);
    offset += x.size();
    n.inputs.push_back(p.id);
  }
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::slice_cols(Var a, std::size_t begin, std::size_t end) {
  const Tensor& x = value(a);
  if (begin >= end || end > x.cols()) throw DimensionError("slice_cols: bad range");
  Node n;
  n.kind = OpKind::kSliceCols;
  const std::size_t w = end - begin;
  n.value = Tensor({x.rows(), w});
  for (std::size_t i = 0; i < x.rows(); ++i)
    std::copy_n(x.data() + i * x.cols() + begin, w, n.value.data() + i * w);
  n.begin = begin;
  n.end = end;
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::slice_rows(Var a, std::size_t begin, std::size_t end) {
  const Tensor& x = value(a);
  if (begin >= end || end > x.rows()) throw DimensionError("slice_rows: bad range");
  Node n;
  n.kind = OpKind::kSliceRows;
  n.value = Tensor({end - begin, x.cols()},
                   std::vector<double>(x.data() + begin * x.cols(), x.data() + end * x.cols()));
  n.begin = begin;
  n.end = end;
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Node n;
  n.kind = OpKind::kTanh;
  n.value = value(a);
  for (double& v : n.value.values()) v = std::tanh(v);
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  Node n;
  n.kind = OpKind::kSigmoid;
  n.value = value(a);
  for (double& v : n.value.values()) v = 1.0 / (1.0 + std::exp(-v));
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::softmax(Var a) {
  Node n;
  n.kind = OpKind::kSoftmax;
  n.value = value(a);
  const std::size_t c = n.value.cols();
  for (std::size_t i = 0; i < n.value.rows(); ++i) {
    double* row = n.value.data() + i * c;
    const double mx = *std::max_element(row, row + c);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += (row[j] = std::exp(row[j] - mx));
    for (std::size_t j = 0; j < c; ++j) row[j] /= z;
  }
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::log(Var a) {
  Node n;
  n.kind = OpKind::kLog;
  n.value = value(a);
  for (double& v : n.value.values()) v = std::log(v);
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::log_softmax(Var a) {
  Node n;
  n.kind = OpKind::kLogSoftmax;
  n.value = value(a);
  const std::size_t c = n.value.cols();
  for (std::size_t i = 0; i < n.value.rows(); ++i) {
    double* row = n.value.data() + i * c;
    const double mx = *std::max_element(row, row + c);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += std::exp(row[j] - mx);
    const double lz = mx + std::log(z);
    for (std::size_t j = 0; j < c; ++j) row[j] -= lz;
  }
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::embedding(const Parameter& table, std::span<const int> ids) {
  const Tensor& t = table.value;
  const std::size_t width = t.cols();
  Node n;
  n.kind = OpKind::kEmbedding;
  n.value = Tensor({ids.size(), width});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= t.rows()) {
      throw DimensionError("embedding: id " + std::to_string(ids[i]) + " outside table of " +
                           std::to_string(t.rows()) + " rows");
    }
    std::copy_n(t.data() + ids[i] * width, width, n.value.data() + i * width);
  }
  n.ids.assign(ids.begin(), ids.end());
  n.param = &table;
  n.requires_grad = record_;
  return push(std::move(n));
}

Var Tape::dropout(Var a, double p, Rng& rng) {
  if (p < 0.0 || p >= 1.0) throw ContractError("dropout probability must be in [0, 1)");
  Node n;
  n.kind = OpKind::kDropout;
  n.value = value(a);
  n.mask = Tensor(n.value.shape());
  const double keep = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.mask[i] = rng.uniform() < p ? 0.0 : keep;
    n.value[i] *= n.mask[i];
  }
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  double s = 0.0;
  for (double v : value(a).values()) s += v;
  Node n;
  n.kind = OpKind::kSum;
  n.value = Tensor::scalar(s);
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::pick(Var a, std::size_t row, std::size_t col) {
  const Tensor& x = value(a);
  if (row >= x.rows() || col >= x.cols()) throw DimensionError("pick: index out of range");
  Node n;
  n.kind = OpKind::kPick;
  n.value = Tensor::scalar(x.at(row, col));
  n.begin = row;
  n.end = col;
  n.inputs = {a.id};
  n.requires_grad = needs(n.inputs);
  return push(std::move(n));
}

Var Tape::apply(OpKind kind, std::span<const Var> in) {
  auto arity = [&](std::size_t k) {
    if (in.size() != k) {
      throw ContractError(std::string(op_name(kind)) + " takes " + std::to_string(k) +
                          " operands");
    }
  };
  switch (kind) {
    case OpKind::kMatMul: arity(2); return matmul(in[0], in[1]);
    case OpKind::kAdd: arity(2); return add(in[0], in[1]);
    case OpKind::kSub: arity(2); return sub(in[0], in[1]);
    case OpKind::kMul: arity(2); return mul(in[0], in[1]);
    case OpKind::kTranspose: arity(1); return transpose(in[0]);
    case OpKind::kTanh: arity(1); return tanh(in[0]);
    case OpKind::kSigmoid: arity(1); return sigmoid(in[0]);
    case OpKind::kSoftmax: arity(1); return softmax(in[0]);
    case OpKind::kLog: arity(1); return log(in[0]);
    case OpKind::kLogSoftmax: arity(1); return log_softmax(in[0]);
    case OpKind::kSum: arity(1); return sum(in[0]);
    case OpKind::kConcatCols: return concat_cols(in);
    case OpKind::kConcatRows: return concat_rows(in);
    default:
      throw ContractError(std::string(op_name(kind)) + " needs extra arguments; call it directly");
  }
}

Tensor& Tape::grad_buffer(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.grad.size() != n.value.size()) n.grad = Tensor(n.value.shape(), 0.0);
  return n.grad;
}

ParamGrads Tape::backward(Var loss) {
  if (!record_) throw ContractError("backward on a tape that does not record gradients");
  const Tensor& l = value(loss);
  if (l.size() != 1) {
    throw ContractError("backward: loss must be scalar, got " + shape_string(l.shape()));
  }
  for (Node& n : nodes_) n.grad = Tensor();
  ParamGrads out;
  grad_buffer(loss.id)[0] = 1.0;
  for (std::uint32_t id = loss.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    backward_node(id, out);
  }
  return out;
}

void Tape::backward_node(std::uint32_t id, ParamGrads& out) {
  // grad_buffer() only touches other nodes' tensors, never nodes_ itself.
  Node& n = nodes_[id];
  const Tensor& g = n.grad;
  auto wants = [&](std::size_t k) { return nodes_[n.inputs[k]].requires_grad; };

  switch (n.kind) {
    case OpKind::kConstant:
      break;
    case OpKind::kParameter:
      accumulate(out.slot(*n.param), g);
      break;
    case OpKind::kMatMul: {
      const Tensor& a = nodes_[n.inputs[0]].value;
      const Tensor& b = nodes_[n.inputs[1]].value;
      const std::size_t r = a.rows(), k = a.cols(), c = b.cols();
      if (wants(0)) {
        Tensor& ga = grad_buffer(n.inputs[0]);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double s = 0.0;
            const double* grow = g.data() + i * c;
            const double* brow = b.data() + p * c;
            for (std::size_t j = 0; j < c; ++j) s += grow[j] * brow[j];
            ga[i * k + p] += s;
          }
      }
      if (wants(1)) {
        Tensor& gb = grad_buffer(n.inputs[1]);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            const double av = a[i * k + p];
            if (av == 0.0) continue;
            const double* grow = g.data() + i * c;
            double* brow = gb.data() + p * c;
            for (std::size_t j = 0; j < c; ++j) brow[j] += av * grow[j];
          }
      }
      break;
    }
    case OpKind::kTranspose: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) ga.at(j, i) += g.at(i, j);
      break;
    }
    case OpKind::kAdd: {
      if (wants(0)) accumulate(grad_buffer(n.inputs[0]), g);
      if (wants(1)) {
        Tensor& gb = grad_buffer(n.inputs[1]);
        if (gb.size() == g.size()) {
          accumulate(gb, g);
        } else {
          const std::size_t c = g.cols();
          for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < c; ++j) gb[j] += g[i * c + j];
        }
      }
      break;
    }
    case OpKind::kSub: {
      if (wants(0)) accumulate(grad_buffer(n.inputs[0]), g);
      if (wants(1)) {
        Tensor& gb = grad_buffer(n.inputs[1]);
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
      }
      break;
    }
    case OpKind::kMul: {
      const Tensor& a = nodes_[n.inputs[0]].value;
      const Tensor& b = nodes_[n.inputs[1]].value;
      if (wants(0)) {
        Tensor& ga = grad_buffer(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b[i];
      }
      if (wants(1)) {
        Tensor& gb = grad_buffer(n.inputs[1]);
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a[i];
      }
      break;
    }
    case OpKind::kScale: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += n.factor * g[i];
      break;
    }
    case OpKind::kConcatCols: {
      const std::size_t rows = g.rows(), cols = g.cols();
      std::size_t offset = 0;
      for (std::size_t k = 0; k < n.inputs.size(); ++k) {
        const std::size_t w = nodes_[n.inputs[k]].value.cols();
        if (wants(k)) {
          Tensor& gi = grad_buffer(n.inputs[k]);
          for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < w; ++j) gi[i * w + j] += g[i * cols + offset + j];
        }
        offset += w;
      }
      break;
    }
    case OpKind::kConcatRows: {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < n.inputs.size(); ++k) {
        const std::size_t sz = nodes_[n.inputs[k]].value.size();
        if (wants(k)) {
          Tensor& gi = grad_buffer(n.inputs[k]);
          for (std::size_t i = 0; i < sz; ++i) gi[i] += g[offset + i];
        }
        offset += sz;
      }
      break;
    }
    case OpKind::kSliceCols: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      const std::size_t w = n.end - n.begin, c = ga.cols();
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < w; ++j) ga[i * c + n.begin + j] += g[i * w + j];
      break;
    }
    case OpKind::kSliceRows: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      const std::size_t off = n.begin * ga.cols();
      for (std::size_t i = 0; i < g.size(); ++i) ga[off + i] += g[i];
      break;
    }
    case OpKind::kTanh: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = n.value[i];
        ga[i] += g[i] * (1.0 - y * y);
      }
      break;
    }
    case OpKind::kSigmoid: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = n.value[i];
        ga[i] += g[i] * y * (1.0 - y);
      }
      break;
    }
    case OpKind::kSoftmax: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      const std::size_t c = g.cols();
      for (std::size_t i = 0; i < g.rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < c; ++j) dot += g[i * c + j] * n.value[i * c + j];
        for (std::size_t j = 0; j < c; ++j)
          ga[i * c + j] += n.value[i * c + j] * (g[i * c + j] - dot);
      }
      break;
    }
    case OpKind::kLog: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      const Tensor& a = nodes_[n.inputs[0]].value;
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] / a[i];
      break;
    }
    case OpKind::kLogSoftmax: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      const std::size_t c = g.cols();
      for (std::size_t i = 0; i < g.rows(); ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < c; ++j) total += g[i * c + j];
        for (std::size_t j = 0; j < c; ++j)
          ga[i * c + j] += g[i * c + j] - std::exp(n.value[i * c + j]) * total;
      }
      break;
    }
    case OpKind::kEmbedding: {
      Tensor& table_grad = out.slot(*n.param);
      const std::size_t w = table_grad.cols();
      for (std::size_t i = 0; i < n.ids.size(); ++i) {
        double* dst = table_grad.data() + static_cast<std::size_t>(n.ids[i]) * w;
        for (std::size_t j = 0; j < w; ++j) dst[j] += g[i * w + j];
      }
      break;
    }
    case OpKind::kDropout: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * n.mask[i];
      break;
    }
    case OpKind::kSum: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      for (double& v : ga.values()) v += g[0];
      break;
    }
    case OpKind::kPick: {
      if (!wants(0)) break;
      Tensor& ga = grad_buffer(n.inputs[0]);
      ga.at(n.begin, n.end) += g[0];
      break;
    }
  }
}

}  // namespace wug::num
