#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace aimac::learn
{

struct TensorSpec
{
    std::string name;
    std::vector<std::size_t> shape;
    std::size_t offset = 0;
    std::size_t size = 0;
};

/// Flat parameter storage with named, shaped views. Gradients and optimizer
/// moments share the layout by indexing a vector of the same length.
class ParamSet
{
  public:
    /// Appends a zero-initialized tensor; returns its offset.
    std::size_t add(std::string name, std::vector<std::size_t> shape);

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    const std::vector<TensorSpec>& tensors() const noexcept { return tensors_; }
    const TensorSpec& tensor(const std::string& name) const;
    std::span<double> view(const std::string& name);
    std::span<const double> view(const std::string& name) const;

    bool same_layout(const ParamSet& other) const;

  private:
    std::vector<TensorSpec> tensors_;
    std::vector<double> values_;
};

} // namespace aimac::learn
