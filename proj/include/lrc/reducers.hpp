#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lrc/geometry.hpp"

namespace lrc {

enum class Method { PCA, Isomap, LTSA, External };

Method parse_method(std::string_view text);
std::string_view method_name(Method method);

/// True for methods whose output is affinely normalized and must be scored
/// with the adjusted measures.
bool is_output_normalized(Method method);

struct ReducerConfig {
    Method method = Method::PCA;
    std::size_t q = 2;
    std::size_t K = 10;  ///< neighborhood size of the graph methods; ignored by PCA
    std::optional<std::filesystem::path> external_path;
};

struct Diagnostics {
    std::vector<double> eigenvalues;           ///< spectrum of the retained components
    std::vector<double> residual_eigenvalues;  ///< next few eigenvalues after the retained ones
    std::size_t graph_components = 0;          ///< graph methods only
    bool output_normalized = false;
    double gram_deviation = 0.0;  ///< max |Y'Y - I| for normalized outputs
    std::vector<std::string> notes;
};

struct Embedding {
    DataMatrix data;
    ReducerConfig config;
    Diagnostics diagnostics;
};

/// Projection onto the top-q principal axes of the mean-centered data. Each
/// axis is signed so that its largest-magnitude entry is positive; components
/// beyond the covariance rank are set to zero and noted.
Embedding reduce_pca(const DataMatrix& X, std::size_t q);

/// Classical MDS on shortest-path distances over the union-symmetrized K-NN
/// graph. Throws DisconnectedGraphError naming the component sizes when the
/// graph is not connected.
Embedding reduce_isomap(const DataMatrix& X, std::size_t q, std::size_t K);

/// Local tangent space alignment with patches made of each case and its K
/// nearest neighbors. The output has orthonormal, zero-mean columns.
Embedding reduce_ltsa(const DataMatrix& X, std::size_t q, std::size_t K);

/// Loads an externally computed embedding and checks its case count.
Embedding import_embedding(const std::filesystem::path& path, std::size_t expected_n);

Embedding reduce(const DataMatrix& X, const ReducerConfig& config);

/// All-pairs graph distances over the union-symmetrized K-NN graph with
/// Euclidean edge weights (Dijkstra from every source).
Matrix graph_distances(const DataMatrix& X, std::size_t K);

/// Sizes of the connected components of the union-symmetrized K-NN graph,
/// largest first.
std::vector<std::size_t> knn_graph_components(const DataMatrix& X, std::size_t K);

}  // namespace lrc
