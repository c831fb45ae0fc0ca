// Layered, clustered network construction and storage.
//
// Connectivity between adjacent layers is stored per layer pair in CSR form:
// the stored edge set is the binary adjacency, and each edge carries a dense
// weight and a transmission probability. The effective weight of an edge is
// weight * release_prob (elementwise), zero wherever no edge exists.
#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lifa/dynamics.hpp"
#include "lifa/error.hpp"
#include "lifa/rng.hpp"

namespace lifa {

enum class CountMode { Unidirectional, Bidirectional };

struct Topology {
    std::vector<int> layer_sizes;
    CountMode count_mode = CountMode::Bidirectional;

    void validate() const {
        if (layer_sizes.size() < 2) throw SpecError("topology needs at least 2 layers");
        for (int n : layer_sizes)
            if (n < 1) throw SpecError("every layer size must be >= 1");
    }

    int layers() const { return static_cast<int>(layer_sizes.size()); }
    std::int64_t neurons() const {
        return std::accumulate(layer_sizes.begin(), layer_sizes.end(), std::int64_t{0});
    }
    // Global index of the first neuron of a layer.
    std::int64_t layer_offset(int layer) const {
        std::int64_t off = 0;
        for (int l = 0; l < layer; ++l) off += layer_sizes[static_cast<std::size_t>(l)];
        return off;
    }
    int layer_of(std::int64_t neuron) const {
        std::int64_t off = 0;
        for (int l = 0; l < layers(); ++l) {
            off += layer_sizes[static_cast<std::size_t>(l)];
            if (neuron < off) return l;
        }
        throw SpecError("neuron index out of range");
    }
};

// CSR block for one adjacent layer pair (rows = presynaptic neurons).
struct EdgeBlock {
    int pre_size = 0;
    int post_size = 0;
    std::vector<std::int64_t> row_ptr;  // pre_size + 1 entries
    std::vector<std::int32_t> col;      // postsynaptic index within the next layer
    std::vector<double> weight;         // dense weight entries
    std::vector<double> release_prob;   // per-edge transmission probability in [0, 1]

    std::int64_t edges() const { return static_cast<std::int64_t>(col.size()); }
};

struct ConnectivityTensor {
    std::vector<EdgeBlock> blocks;        // one per adjacent layer pair
    std::vector<std::int64_t> block_base; // global edge id of each block's first edge

    std::int64_t total_edges() const {
        std::int64_t n = 0;
        for (const auto& b : blocks) n += b.edges();
        return n;
    }
    void rebuild_block_base() {
        block_base.resize(blocks.size());
        std::int64_t base = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            block_base[b] = base;
            base += blocks[b].edges();
        }
    }
    // Maps a global edge id to (block, offset within block).
    std::pair<int, std::int64_t> locate(std::int64_t edge_id) const {
        for (std::size_t b = blocks.size(); b-- > 0;) {
            if (edge_id >= block_base[b]) {
                const std::int64_t off = edge_id - block_base[b];
                if (off >= blocks[b].edges()) break;
                return {static_cast<int>(b), off};
            }
        }
        throw SpecError("edge id " + std::to_string(edge_id) + " out of range");
    }
};

enum class ClusterPolicy { ByLayerBlock, RoundRobin };

struct ClusterMap {
    int cluster_count = 1;
    std::vector<std::int32_t> cluster_of;  // neuron index -> cluster id

    void validate(std::int64_t neurons) const {
        if (static_cast<std::int64_t>(cluster_of.size()) != neurons)
            throw SpecError("cluster map size does not match neuron count");
        for (std::int32_t c : cluster_of)
            if (c < 0 || c >= cluster_count) throw SpecError("cluster id out of range");
    }
};

struct Astrocyte {
    int id = 0;
    int cluster = 0;
    int layer = 0;
    bool disabled = false;
    std::vector<std::int64_t> covered;      // global neuron indices, sorted
    std::vector<double> coverage_weights;   // synapse->astrocyte weights, uniform by default
    AstrocyteParams params;
};

struct AstrocyteRoster {
    std::vector<Astrocyte> astrocytes;
    std::int64_t neurons_per_astrocyte_budget = 4452;
    // Astrocyte-to-astrocyte coupling, kept in the type but fixed to zero.
    std::vector<double> astro_coupling;

    int enabled_count() const {
        int n = 0;
        for (const auto& a : astrocytes)
            if (!a.disabled) ++n;
        return n;
    }
};

enum class WeightInitKind { UniformScaled, Uniform, Constant, Normal };

struct WeightInit {
    WeightInitKind kind = WeightInitKind::UniformScaled;
    double a = 0.0;  // lower bound / constant / mean
    double b = 0.0;  // upper bound / stddev
};

struct NetworkSpec {
    Topology topology;
    std::shared_ptr<const ConnectivityTensor> connectivity;
    ClusterMap clusters;
    AstrocyteRoster roster;
    NeuronParams neuron_params;
    AstrocyteParams astro_defaults;
    std::uint64_t seed = 0;

    std::int64_t neurons() const { return topology.neurons(); }
    const ConnectivityTensor& edges() const {
        if (!connectivity) throw SpecError("network has no connectivity");
        return *connectivity;
    }
};

inline std::int64_t total_neurons(const NetworkSpec& spec) { return spec.neurons(); }

inline std::int64_t synapse_count(const NetworkSpec& spec,
                                  std::optional<CountMode> mode = std::nullopt) {
    const std::int64_t unidirectional = spec.edges().total_edges();
    const CountMode m = mode.value_or(spec.topology.count_mode);
    return m == CountMode::Bidirectional ? 2 * unidirectional : unidirectional;
}

namespace detail {

inline double draw_weight(const WeightInit& init, int fan_in, Rng& rng) {
    switch (init.kind) {
        case WeightInitKind::UniformScaled: {
            const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
            return rng.uniform(-scale, scale);
        }
        case WeightInitKind::Uniform:
            return rng.uniform(init.a, init.b);
        case WeightInitKind::Constant:
            return init.a;
        case WeightInitKind::Normal:
            return init.a + init.b * rng.normal();
    }
    throw ConfigError("unknown weight init kind");
}

} // namespace detail

// Builds a feedforward network. Each layer pair gets
// ceil(density * n_pre * n_post) edges chosen uniformly without replacement
// (density = 1 is dense), release probabilities start at 1 and weights come
// from the given init. Fully reproducible from the seed.
inline NetworkSpec build_feedforward(const Topology& topology, double density,
                                     const WeightInit& weight_init, std::uint64_t seed) {
    topology.validate();
    if (!(density > 0.0 && density <= 1.0)) throw SpecError("density must be in (0, 1]");

    auto tensor = std::make_shared<ConnectivityTensor>();
    tensor->blocks.resize(static_cast<std::size_t>(topology.layers() - 1));
    for (int b = 0; b + 1 < topology.layers(); ++b) {
        EdgeBlock& block = tensor->blocks[static_cast<std::size_t>(b)];
        block.pre_size = topology.layer_sizes[static_cast<std::size_t>(b)];
        block.post_size = topology.layer_sizes[static_cast<std::size_t>(b + 1)];
        const std::int64_t cells =
            static_cast<std::int64_t>(block.pre_size) * block.post_size;
        const std::int64_t wanted =
            static_cast<std::int64_t>(std::ceil(density * static_cast<double>(cells)));

        Rng structure_rng(substream(seed, 0x5712u, static_cast<std::uint64_t>(b)));
        Rng weight_rng(substream(seed, 0x9e1fu, static_cast<std::uint64_t>(b)));

        block.row_ptr.assign(static_cast<std::size_t>(block.pre_size) + 1, 0);
        block.col.reserve(static_cast<std::size_t>(wanted));
        if (wanted == cells) {
            for (int r = 0; r < block.pre_size; ++r) {
                block.row_ptr[static_cast<std::size_t>(r)] =
                    static_cast<std::int64_t>(r) * block.post_size;
                for (int c = 0; c < block.post_size; ++c)
                    block.col.push_back(static_cast<std::int32_t>(c));
            }
            block.row_ptr[static_cast<std::size_t>(block.pre_size)] = cells;
        } else {
            const auto chosen = structure_rng.sample_without_replacement(cells, wanted);
            std::vector<std::int64_t> per_row(static_cast<std::size_t>(block.pre_size), 0);
            for (std::int64_t cell : chosen)
                ++per_row[static_cast<std::size_t>(cell / block.post_size)];
            std::int64_t acc = 0;
            for (int r = 0; r < block.pre_size; ++r) {
                block.row_ptr[static_cast<std::size_t>(r)] = acc;
                acc += per_row[static_cast<std::size_t>(r)];
            }
            block.row_ptr[static_cast<std::size_t>(block.pre_size)] = acc;
            for (std::int64_t cell : chosen)
                block.col.push_back(static_cast<std::int32_t>(cell % block.post_size));
        }
        block.weight.resize(block.col.size());
        for (double& w : block.weight)
            w = detail::draw_weight(weight_init, block.pre_size, weight_rng);
        block.release_prob.assign(block.col.size(), 1.0);
    }
    tensor->rebuild_block_base();

    NetworkSpec spec;
    spec.topology = topology;
    spec.connectivity = std::move(tensor);
    spec.seed = seed;
    spec.clusters.cluster_count = 1;
    spec.clusters.cluster_of.assign(static_cast<std::size_t>(spec.neurons()), 0);
    return spec;
}

// Partitions neurons into k clusters. ByLayerBlock slices every layer into k
// nearly equal contiguous blocks (sizes differing by at most one); RoundRobin
// deals neurons of each layer out cyclically by within-layer position.
inline ClusterMap assign_clusters(const NetworkSpec& spec, int k, ClusterPolicy policy) {
    if (k < 1 || static_cast<std::int64_t>(k) > spec.neurons())
        throw SpecError("cluster count must be in [1, neuron count]");
    ClusterMap map;
    map.cluster_count = k;
    map.cluster_of.resize(static_cast<std::size_t>(spec.neurons()));
    for (int layer = 0; layer < spec.topology.layers(); ++layer) {
        const std::int64_t offset = spec.topology.layer_offset(layer);
        const int n = spec.topology.layer_sizes[static_cast<std::size_t>(layer)];
        if (policy == ClusterPolicy::RoundRobin) {
            for (int i = 0; i < n; ++i)
                map.cluster_of[static_cast<std::size_t>(offset + i)] =
                    static_cast<std::int32_t>(i % k);
        } else {
            const int base = n / k;
            const int extra = n % k;  // first `extra` clusters get one more
            int i = 0;
            for (int c = 0; c < k; ++c) {
                const int take = base + (c < extra ? 1 : 0);
                for (int j = 0; j < take; ++j, ++i)
                    map.cluster_of[static_cast<std::size_t>(offset + i)] =
                        static_cast<std::int32_t>(c);
            }
        }
    }
    return map;
}

inline std::vector<std::int64_t> cluster_layer_members(const NetworkSpec& spec, int cluster,
                                                       int layer) {
    if (cluster < 0 || cluster >= spec.clusters.cluster_count)
        throw SpecError("cluster id out of range");
    if (layer < 0 || layer >= spec.topology.layers()) throw SpecError("layer id out of range");
    std::vector<std::int64_t> members;
    const std::int64_t offset = spec.topology.layer_offset(layer);
    const int n = spec.topology.layer_sizes[static_cast<std::size_t>(layer)];
    for (int i = 0; i < n; ++i) {
        const std::int64_t neuron = offset + i;
        if (spec.clusters.cluster_of[static_cast<std::size_t>(neuron)] == cluster)
            members.push_back(neuron);
    }
    return members;
}

struct AttachResult {
    NetworkSpec spec;
    int astrocyte_id = -1;  // -1 when saturated
    bool saturated = false;
};

// Adds one astrocyte to (cluster, layer), covering up to `budget`
// currently-uncovered neurons of that layer slice, lowest index first.
// Covered sets stay disjoint within a cluster. Connectivity is shared with
// the input spec, so the copy is cheap.
inline AttachResult attach_astrocyte(const NetworkSpec& spec, int cluster, int layer,
                                     std::int64_t budget,
                                     std::optional<AstrocyteParams> params = std::nullopt) {
    if (budget < 1) throw SpecError("astrocyte budget must be >= 1");
    const auto members = cluster_layer_members(spec, cluster, layer);

    std::vector<bool> covered_flag(members.size(), false);
    for (const auto& astro : spec.roster.astrocytes) {
        if (astro.cluster != cluster) continue;
        for (std::int64_t n : astro.covered) {
            const auto it = std::lower_bound(members.begin(), members.end(), n);
            if (it != members.end() && *it == n)
                covered_flag[static_cast<std::size_t>(it - members.begin())] = true;
        }
    }

    AttachResult result;
    result.spec = spec;
    Astrocyte astro;
    astro.id = static_cast<int>(spec.roster.astrocytes.size());
    astro.cluster = cluster;
    astro.layer = layer;
    astro.params = params.value_or(spec.astro_defaults);
    for (std::size_t i = 0; i < members.size() && astro.covered.size() <
                                static_cast<std::size_t>(budget); ++i) {
        if (!covered_flag[i]) astro.covered.push_back(members[i]);
    }
    if (astro.covered.empty()) {
        result.saturated = true;
        return result;
    }
    astro.coverage_weights.assign(astro.covered.size(),
                                  1.0 / static_cast<double>(astro.covered.size()));
    result.astrocyte_id = astro.id;
    result.spec.roster.astrocytes.push_back(std::move(astro));
    result.spec.roster.neurons_per_astrocyte_budget = budget;
    const std::size_t k = result.spec.roster.astrocytes.size();
    result.spec.roster.astro_coupling.assign(k * k, 0.0);
    return result;
}

struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Materializes the effective per-layer-pair weight matrices
// (adjacency x release probability x dense weight, elementwise).
inline std::vector<DenseMatrix> effective_connectivity(const NetworkSpec& spec) {
    std::vector<DenseMatrix> out;
    for (const EdgeBlock& block : spec.edges().blocks) {
        if (block.row_ptr.size() != static_cast<std::size_t>(block.pre_size) + 1 ||
            block.weight.size() != block.col.size() ||
            block.release_prob.size() != block.col.size())
            throw SpecError("connectivity block shape mismatch");
        DenseMatrix m;
        m.rows = block.pre_size;
        m.cols = block.post_size;
        m.data.assign(static_cast<std::size_t>(m.rows) * m.cols, 0.0);
        for (int r = 0; r < block.pre_size; ++r) {
            for (std::int64_t e = block.row_ptr[static_cast<std::size_t>(r)];
                 e < block.row_ptr[static_cast<std::size_t>(r) + 1]; ++e) {
                const auto idx = static_cast<std::size_t>(e);
                m.at(r, block.col[idx]) = block.weight[idx] * block.release_prob[idx];
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

// Global-index bounds of the neurons an astrocyte covers, for reporting.
inline std::int64_t covered_neuron_count(const NetworkSpec& spec) {
    std::int64_t n = 0;
    for (const auto& a : spec.roster.astrocytes)
        if (!a.disabled) n += static_cast<std::int64_t>(a.covered.size());
    return n;
}

} // namespace lifa
