#include "aimac/learn/params.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace aimac::learn
{

std::size_t ParamSet::add(std::string name, std::vector<std::size_t> shape)
{
    for (const auto& t : tensors_)
    {
        if (t.name == name)
            throw std::invalid_argument("duplicate tensor name " + name);
    }
    const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    TensorSpec spec{std::move(name), std::move(shape), values_.size(), n};
    values_.resize(values_.size() + n, 0.0);
    tensors_.push_back(std::move(spec));
    return tensors_.back().offset;
}

const TensorSpec& ParamSet::tensor(const std::string& name) const
{
    for (const auto& t : tensors_)
    {
        if (t.name == name)
            return t;
    }
    throw std::out_of_range("no tensor named " + name);
}

std::span<double> ParamSet::view(const std::string& name)
{
    const auto& t = tensor(name);
    return std::span<double>(values_).subspan(t.offset, t.size);
}

std::span<const double> ParamSet::view(const std::string& name) const
{
    const auto& t = tensor(name);
    return std::span<const double>(values_).subspan(t.offset, t.size);
}

bool ParamSet::same_layout(const ParamSet& other) const
{
    if (tensors_.size() != other.tensors_.size())
        return false;
    for (std::size_t i = 0; i < tensors_.size(); ++i)
    {
        if (tensors_[i].name != other.tensors_[i].name || tensors_[i].shape != other.tensors_[i].shape)
            return false;
    }
    return true;
}

} // namespace aimac::learn
