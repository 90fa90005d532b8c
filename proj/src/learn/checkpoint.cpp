// Checkpoint container, little-endian:
//   "AIMACKPT" | u32 version | u32 tensor_count
//   per tensor: u32 name_len | name | u32 ndim | u64 dims[ndim] | f64 data[prod(dims)]
#include "aimac/learn/qmix.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace aimac::learn
{

namespace
{

constexpr char kMagic[8] = {'A', 'I', 'M', 'A', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T> void put(std::ostream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T> T get(std::istream& in)
{
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in)
    {
        throw std::runtime_error("checkpoint truncated");
    }
    return v;
}

} // namespace

void save_checkpoint(const QmixModel& model, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write checkpoint " + path.string());
    }
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kVersion);
    const auto& tensors = model.params().tensors();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
    const auto values = model.params().values();
    for (const auto& t : tensors)
    {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
        for (auto d : t.shape)
            put<std::uint64_t>(out, d);
        out.write(reinterpret_cast<const char*>(values.data() + t.offset),
                  static_cast<std::streamsize>(t.size * sizeof(double)));
    }
    if (!out)
    {
        throw std::runtime_error("failed writing checkpoint " + path.string());
    }
}

QmixModel load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot read checkpoint " + path.string());
    }
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    {
        throw std::runtime_error("not a checkpoint file: " + path.string());
    }
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
    {
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    }
    const auto count = get<std::uint32_t>(in);

    struct Loaded
    {
        std::string name;
        std::vector<std::size_t> shape;
        std::vector<double> data;
    };
    std::vector<Loaded> loaded;
    for (std::uint32_t i = 0; i < count; ++i)
    {
        Loaded t;
        const auto len = get<std::uint32_t>(in);
        t.name.resize(len);
        in.read(t.name.data(), len);
        const auto ndim = get<std::uint32_t>(in);
        std::size_t n = 1;
        for (std::uint32_t d = 0; d < ndim; ++d)
        {
            t.shape.push_back(static_cast<std::size_t>(get<std::uint64_t>(in)));
            n *= t.shape.back();
        }
        t.data.resize(n);
        in.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(n * sizeof(double)));
        if (!in)
        {
            throw std::runtime_error("checkpoint truncated in tensor " + t.name);
        }
        loaded.push_back(std::move(t));
    }

    auto find = [&](const std::string& name) -> const Loaded& {
        for (const auto& t : loaded)
            if (t.name == name)
                return t;
        throw std::runtime_error("checkpoint missing tensor " + name);
    };
    QmixShapes shapes;
    const auto& ca_w1 = find("ca.w1").shape;
    const auto& ca_w2 = find("ca.w2").shape;
    const auto& rc_w1 = find("rc.w1").shape;
    const auto& rc_w2 = find("rc.w2").shape;
    const auto& mw1 = find("mix.hyper_w1.w").shape;
    const auto& mb1 = find("mix.hyper_b1.w").shape;
    const auto& mv1 = find("mix.hyper_b2.w1").shape;
    shapes.ca = QNetShape{ca_w1.at(1), ca_w1.at(0), ca_w2.at(0)};
    shapes.rc = QNetShape{rc_w1.at(1), rc_w1.at(0), rc_w2.at(0)};
    shapes.mixer = MixerShape{mw1.at(0) / mb1.at(0), mw1.at(1), mb1.at(0), mv1.at(0)};

    QmixModel model(shapes);
    for (const auto& spec : model.params().tensors())
    {
        const auto& t = find(spec.name);
        if (t.shape != spec.shape)
        {
            throw std::runtime_error("checkpoint tensor " + spec.name + " has an unexpected shape");
        }
        auto dst = model.params().view(spec.name);
        std::copy(t.data.begin(), t.data.end(), dst.begin());
    }
    return model;
}

} // namespace aimac::learn
