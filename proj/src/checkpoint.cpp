#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>

#include "acta/cgan.hpp"

namespace acta {

namespace {

constexpr char kMagic[4] = {'A', 'C', 'T', 'A'};
constexpr std::size_t kMaxNameLen = 1 << 16;
constexpr std::uint64_t kMaxArrayElems = 1ull << 32;

struct NamedArray {
    std::vector<std::uint64_t> dims;
    nn::Vec data;

    std::uint64_t elems() const {
        std::uint64_t n = 1;
        for (std::uint64_t d : dims) n *= d;
        return n;
    }
};

using ArrayTable = std::map<std::string, NamedArray>;

void put_u32(std::ostream& os, std::uint32_t x) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    os.write(b, 4);
}

void put_u64(std::ostream& os, std::uint64_t x) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    os.write(b, 8);
}

void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw CheckpointTruncatedError("checkpoint ends mid-field");
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return x;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw CheckpointTruncatedError("checkpoint ends mid-field");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void write_table(std::ostream& os, const ArrayTable& table) {
    os.write(kMagic, 4);
    put_u32(os, kCheckpointVersion);
    put_u32(os, static_cast<std::uint32_t>(table.size()));
    for (const auto& [name, arr] : table) {
        put_u32(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(os, static_cast<std::uint32_t>(arr.dims.size()));
        for (std::uint64_t d : arr.dims) put_u64(os, d);
        if (arr.elems() != arr.data.size()) {
            throw CheckpointShapeError("array '" + name + "' dims disagree with data length");
        }
        for (double x : arr.data) put_f64(os, x);
    }
}

ArrayTable read_table(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4)) throw CheckpointTruncatedError("checkpoint shorter than header");
    if (std::memcmp(magic, kMagic, 4) != 0) throw CheckpointFormatError("bad checkpoint magic");
    const std::uint32_t version = get_u32(is);
    if (version != kCheckpointVersion) {
        throw CheckpointVersionError("unsupported checkpoint version " + std::to_string(version));
    }
    const std::uint32_t count = get_u32(is);
    ArrayTable table;
    for (std::uint32_t e = 0; e < count; ++e) {
        const std::uint32_t name_len = get_u32(is);
        if (name_len > kMaxNameLen) throw CheckpointFormatError("unreasonable array name length");
        std::string name(name_len, '\0');
        if (!is.read(name.data(), name_len)) throw CheckpointTruncatedError("checkpoint ends mid-name");
        NamedArray arr;
        const std::uint32_t dims_count = get_u32(is);
        if (dims_count > 8) throw CheckpointFormatError("unreasonable dims count");
        arr.dims.resize(dims_count);
        for (std::uint32_t i = 0; i < dims_count; ++i) arr.dims[i] = get_u64(is);
        const std::uint64_t elems = arr.elems();
        if (elems > kMaxArrayElems) throw CheckpointShapeError("array '" + name + "' too large");
        arr.data.resize(elems);
        for (std::uint64_t i = 0; i < elems; ++i) arr.data[i] = get_f64(is);
        if (!table.emplace(std::move(name), std::move(arr)).second) {
            throw CheckpointFormatError("duplicate array name in checkpoint");
        }
    }
    return table;
}

NamedArray from_matrix(const nn::Matrix& m) {
    return NamedArray{{m.rows(), m.cols()}, m.values()};
}

NamedArray from_vec(const nn::Vec& v) { return NamedArray{{v.size()}, v}; }

NamedArray from_u64_pair(std::uint64_t a, std::uint64_t b) {
    return NamedArray{{4},
                      {static_cast<double>(a >> 32), static_cast<double>(a & 0xffffffffull),
                       static_cast<double>(b >> 32), static_cast<double>(b & 0xffffffffull)}};
}

NamedArray from_string(const std::string& s) {
    NamedArray arr;
    arr.dims = {s.size()};
    arr.data.reserve(s.size());
    for (unsigned char c : s) arr.data.push_back(static_cast<double>(c));
    return arr;
}

void add_mlp(ArrayTable& table, const std::string& prefix, const nn::CondMlp& net) {
    table[prefix + ".embedding"] = from_matrix(net.embedding.table);
    table[prefix + ".h1.weights"] = from_matrix(net.hidden1.weights);
    table[prefix + ".h1.bias"] = from_vec(net.hidden1.bias);
    table[prefix + ".h2.weights"] = from_matrix(net.hidden2.weights);
    table[prefix + ".h2.bias"] = from_vec(net.hidden2.bias);
    table[prefix + ".out.weights"] = from_matrix(net.output.weights);
    table[prefix + ".out.bias"] = from_vec(net.output.bias);
}

void add_adam(ArrayTable& table, const std::string& prefix, const nn::AdamState& opt) {
    table[prefix + ".scalars"] =
        NamedArray{{5},
                   {opt.learning_rate, opt.beta1, opt.beta2, opt.epsilon,
                    static_cast<double>(opt.step_count)}};
    for (std::size_t i = 0; i < opt.first_moment.size(); ++i) {
        table[prefix + ".m" + std::to_string(i)] = from_vec(opt.first_moment[i]);
        table[prefix + ".v" + std::to_string(i)] = from_vec(opt.second_moment[i]);
    }
}

const NamedArray& need(const ArrayTable& table, const std::string& name) {
    auto it = table.find(name);
    if (it == table.end()) throw CheckpointShapeError("checkpoint missing array '" + name + "'");
    return it->second;
}

void load_matrix(const ArrayTable& table, const std::string& name, nn::Matrix& into) {
    const NamedArray& arr = need(table, name);
    if (arr.dims.size() != 2 || arr.dims[0] != into.rows() || arr.dims[1] != into.cols()) {
        throw CheckpointShapeError("array '" + name + "' has unexpected shape");
    }
    into.values() = arr.data;
}

void load_vec(const ArrayTable& table, const std::string& name, nn::Vec& into) {
    const NamedArray& arr = need(table, name);
    if (arr.dims.size() != 1 || arr.dims[0] != into.size()) {
        throw CheckpointShapeError("array '" + name + "' has unexpected shape");
    }
    into = arr.data;
}

std::pair<std::uint64_t, std::uint64_t> load_u64_pair(const ArrayTable& table, const std::string& name) {
    const NamedArray& arr = need(table, name);
    if (arr.data.size() != 4) throw CheckpointShapeError("array '" + name + "' has unexpected shape");
    auto join = [](double hi, double lo) {
        return (static_cast<std::uint64_t>(hi) << 32) | static_cast<std::uint64_t>(lo);
    };
    return {join(arr.data[0], arr.data[1]), join(arr.data[2], arr.data[3])};
}

std::string load_string(const ArrayTable& table, const std::string& name) {
    const NamedArray& arr = need(table, name);
    std::string s;
    s.reserve(arr.data.size());
    for (double d : arr.data) s.push_back(static_cast<char>(static_cast<unsigned char>(d)));
    return s;
}

void load_mlp(const ArrayTable& table, const std::string& prefix, nn::CondMlp& net) {
    load_matrix(table, prefix + ".embedding", net.embedding.table);
    load_matrix(table, prefix + ".h1.weights", net.hidden1.weights);
    load_vec(table, prefix + ".h1.bias", net.hidden1.bias);
    load_matrix(table, prefix + ".h2.weights", net.hidden2.weights);
    load_vec(table, prefix + ".h2.bias", net.hidden2.bias);
    load_matrix(table, prefix + ".out.weights", net.output.weights);
    load_vec(table, prefix + ".out.bias", net.output.bias);
}

void load_adam(const ArrayTable& table, const std::string& prefix, nn::AdamState& opt,
               const std::vector<std::size_t>& sizes) {
    const NamedArray& scalars = need(table, prefix + ".scalars");
    if (scalars.data.size() != 5) throw CheckpointShapeError("array '" + prefix + ".scalars' malformed");
    opt.learning_rate = scalars.data[0];
    opt.beta1 = scalars.data[1];
    opt.beta2 = scalars.data[2];
    opt.epsilon = scalars.data[3];
    opt.step_count = static_cast<std::uint64_t>(scalars.data[4]);
    opt.init(sizes);
    opt.step_count = static_cast<std::uint64_t>(scalars.data[4]);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        load_vec(table, prefix + ".m" + std::to_string(i), opt.first_moment[i]);
        load_vec(table, prefix + ".v" + std::to_string(i), opt.second_moment[i]);
    }
}

}  // namespace

void save_checkpoint(const CGANModel& model, const std::string& path) {
    ArrayTable table;
    table["meta"] = NamedArray{{4},
                               {static_cast<double>(model.num_requirements),
                                static_cast<double>(model.space.dimension()),
                                static_cast<double>(model.gen.net.embed_dim()),
                                static_cast<double>(model.gen.net.hidden_dim())}};
    table["input_space"] = from_string(space_to_json(model.space));
    table["rng"] = from_u64_pair(model.rng_seed, model.rng.state());
    add_mlp(table, "gen", model.gen.net);
    add_mlp(table, "disc", model.disc.net);
    add_adam(table, "opt.gen", model.gen_opt);
    add_adam(table, "opt.disc", model.disc_opt);

    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw CheckpointError("cannot open '" + tmp.string() + "' for writing");
        write_table(os, table);
        os.flush();
        if (!os) throw CheckpointError("failed writing checkpoint to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

CGANModel load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot open checkpoint '" + path + "'");
    const ArrayTable table = read_table(is);

    const NamedArray& meta = need(table, "meta");
    if (meta.data.size() != 4) throw CheckpointShapeError("meta array malformed");
    const auto num_requirements = static_cast<std::size_t>(meta.data[0]);
    const auto feature_dim = static_cast<std::size_t>(meta.data[1]);
    const auto embed_dim = static_cast<std::size_t>(meta.data[2]);
    const auto hidden_dim = static_cast<std::size_t>(meta.data[3]);

    const InputSpace space = space_from_json(load_string(table, "input_space"));
    if (space.dimension() != feature_dim) {
        throw CheckpointShapeError("input space dimension disagrees with meta");
    }

    CGANModel model;
    model.space = space;
    model.num_requirements = num_requirements;
    Rng shape_rng(0);  // placeholder init; every parameter is overwritten below
    model.gen.net = nn::CondMlp(feature_dim, num_requirements, embed_dim, hidden_dim, feature_dim,
                                nn::Activation::Tanh, shape_rng);
    model.disc.net = nn::CondMlp(feature_dim, num_requirements, embed_dim, hidden_dim, 1,
                                 nn::Activation::Sigmoid, shape_rng);
    load_mlp(table, "gen", model.gen.net);
    load_mlp(table, "disc", model.disc.net);
    load_adam(table, "opt.gen", model.gen_opt, model.gen.net.parameter_sizes());
    load_adam(table, "opt.disc", model.disc_opt, model.disc.net.parameter_sizes());
    const auto [seed, state] = load_u64_pair(table, "rng");
    model.rng_seed = seed;
    model.rng.set_state(state);
    return model;
}

}  // namespace acta
