#include "lrc/reducers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "lrc/error.hpp"
#include "lrc/matrix_io.hpp"
#include "lrc/parallel.hpp"

namespace lrc {

Method parse_method(std::string_view text) {
    if (text == "pca" || text == "PCA") return Method::PCA;
    if (text == "isomap" || text == "Isomap" || text == "ISOMAP") return Method::Isomap;
    if (text == "ltsa" || text == "LTSA") return Method::LTSA;
    if (text == "external" || text == "External") return Method::External;
    throw ParameterError("unknown method '" + std::string(text) + "'");
}

std::string_view method_name(Method method) {
    switch (method) {
        case Method::PCA: return "pca";
        case Method::Isomap: return "isomap";
        case Method::LTSA: return "ltsa";
        case Method::External: return "external";
    }
    return "?";
}

bool is_output_normalized(Method method) { return method == Method::LTSA; }

namespace {

constexpr std::size_t kResidualEigenvalues = 5;

// Largest-magnitude entry of every column made positive (first one on ties).
void fix_signs(Matrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
    }
}

void check_target_dim(const DataMatrix& X, std::size_t q) {
    if (q < 1 || q >= X.n_dims()) {
        throw ParameterError("target dimension q must lie in [1, " + std::to_string(X.n_dims() - 1) +
                             "], got " + std::to_string(q));
    }
}

void check_neighborhood_size(const DataMatrix& X, std::size_t K) {
    if (K < 1 || K > X.n_cases() - 1) {
        throw ParameterError("neighborhood size K must lie in [1, " + std::to_string(X.n_cases() - 1) +
                             "], got " + std::to_string(K));
    }
}

std::vector<std::vector<std::pair<CaseIndex, double>>> knn_graph(const DataMatrix& X, std::size_t K) {
    const NeighborhoodTable nbrs = build_neighborhoods(X, K);
    const std::size_t n = X.n_cases();
    std::vector<std::vector<std::pair<CaseIndex, double>>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = nbrs.neighbors(i);
        const auto dist = nbrs.distances(i);
        for (std::size_t p = 0; p < K; ++p) {
            adj[i].emplace_back(idx[p], dist[p]);
            adj[idx[p]].emplace_back(static_cast<CaseIndex>(i), dist[p]);
        }
    }
    for (auto& edges : adj) {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; }),
                    edges.end());
    }
    return adj;
}

std::vector<std::size_t> component_sizes(const std::vector<std::vector<std::pair<CaseIndex, double>>>& adj) {
    const std::size_t n = adj.size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> sizes;
    std::vector<CaseIndex> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::size_t count = 0;
        seen[s] = true;
        stack.push_back(static_cast<CaseIndex>(s));
        while (!stack.empty()) {
            const CaseIndex v = stack.back();
            stack.pop_back();
            ++count;
            for (const auto& [w, d] : adj[v]) {
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        sizes.push_back(count);
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

std::string describe_components(const std::vector<std::size_t>& sizes) {
    std::string s = "[";
    for (std::size_t c = 0; c < sizes.size(); ++c) s += (c ? ", " : "") + std::to_string(sizes[c]);
    return s + "]";
}

}  // namespace

std::vector<std::size_t> knn_graph_components(const DataMatrix& X, std::size_t K) {
    check_neighborhood_size(X, K);
    return component_sizes(knn_graph(X, K));
}

Matrix graph_distances(const DataMatrix& X, std::size_t K) {
    check_neighborhood_size(X, K);
    const auto adj = knn_graph(X, K);
    const auto sizes = component_sizes(adj);
    if (sizes.size() > 1) {
        throw DisconnectedGraphError("k-NN graph with K=" + std::to_string(K) + " has " +
                                     std::to_string(sizes.size()) + " connected components of sizes " +
                                     describe_components(sizes));
    }

    const std::size_t n = X.n_cases();
    Matrix D(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t source) {
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        using Item = std::pair<double, CaseIndex>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[source] = 0.0;
        heap.emplace(0.0, static_cast<CaseIndex>(source));
        while (!heap.empty()) {
            const auto [d, v] = heap.top();
            heap.pop();
            if (d > dist[v]) continue;
            for (const auto& [w, len] : adj[v]) {
                const double nd = d + len;
                if (nd < dist[w]) {
                    dist[w] = nd;
                    heap.emplace(nd, w);
                }
            }
        }
        for (std::size_t t = 0; t < n; ++t) D(static_cast<Eigen::Index>(source), static_cast<Eigen::Index>(t)) = dist[t];
    });
    // Path sums accumulate in different orders from the two endpoints.
    return (D + D.transpose()) * 0.5;
}

Embedding reduce_pca(const DataMatrix& X, std::size_t q) {
    check_target_dim(X, q);
    const Matrix centered = X.values().rowwise() - X.values().colwise().mean();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(X.n_cases() - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);

    const auto p = cov.rows();
    const auto qq = static_cast<Eigen::Index>(q);
    // Eigen returns ascending eigenvalues; reverse into descending order.
    Matrix axes(p, qq);
    Diagnostics diag;
    for (Eigen::Index c = 0; c < qq; ++c) {
        axes.col(c) = eig.eigenvectors().col(p - 1 - c);
        diag.eigenvalues.push_back(eig.eigenvalues()(p - 1 - c));
    }
    for (Eigen::Index c = qq; c < p && diag.residual_eigenvalues.size() < kResidualEigenvalues; ++c) {
        diag.residual_eigenvalues.push_back(eig.eigenvalues()(p - 1 - c));
    }
    fix_signs(axes);
    Matrix scores = centered * axes;

    const double top = std::max(eig.eigenvalues()(p - 1), 0.0);
    const double rank_tol = 1e-12 * top * static_cast<double>(p);
    std::size_t zeroed = 0;
    for (Eigen::Index c = 0; c < qq; ++c) {
        if (diag.eigenvalues[static_cast<std::size_t>(c)] <= rank_tol) {
            scores.col(c).setZero();
            ++zeroed;
        }
    }
    if (zeroed > 0) {
        diag.notes.push_back("covariance rank is below q; " + std::to_string(zeroed) +
                             " trailing component(s) set to zero");
    }
    return {DataMatrix(std::move(scores)), ReducerConfig{Method::PCA, q, 0, std::nullopt}, std::move(diag)};
}

Embedding reduce_isomap(const DataMatrix& X, std::size_t q, std::size_t K) {
    check_target_dim(X, q);
    const Matrix D = graph_distances(X, K);
    const Eigen::Index n = D.rows();

    // Double-centered squared distances.
    Matrix B = D.cwiseProduct(D);
    const Vector row_mean = B.rowwise().mean();
    const double grand = row_mean.mean();
    B = -0.5 * ((B.colwise() - row_mean).rowwise() - row_mean.transpose()).array() - 0.5 * grand;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(B);
    const auto qq = static_cast<Eigen::Index>(q);
    Matrix vectors(n, qq);
    Diagnostics diag;
    diag.graph_components = 1;
    for (Eigen::Index c = 0; c < qq; ++c) {
        vectors.col(c) = eig.eigenvectors().col(n - 1 - c);
        diag.eigenvalues.push_back(eig.eigenvalues()(n - 1 - c));
    }
    for (Eigen::Index c = qq; c < n && diag.residual_eigenvalues.size() < kResidualEigenvalues; ++c) {
        diag.residual_eigenvalues.push_back(eig.eigenvalues()(n - 1 - c));
    }
    fix_signs(vectors);
    for (Eigen::Index c = 0; c < qq; ++c) {
        const double lambda = diag.eigenvalues[static_cast<std::size_t>(c)];
        if (lambda <= 0.0) diag.notes.push_back("non-positive MDS eigenvalue; component " + std::to_string(c + 1) + " set to zero");
        vectors.col(c) *= std::sqrt(std::max(lambda, 0.0));
    }
    return {DataMatrix(std::move(vectors)), ReducerConfig{Method::Isomap, q, K, std::nullopt}, std::move(diag)};
}

Embedding reduce_ltsa(const DataMatrix& X, std::size_t q, std::size_t K) {
    check_target_dim(X, q);
    check_neighborhood_size(X, K);
    if (K <= q) {
        throw ParameterError("LTSA needs K > q, got K=" + std::to_string(K) + ", q=" + std::to_string(q));
    }
    const std::size_t n = X.n_cases();
    const NeighborhoodTable nbrs = build_neighborhoods(X, K);
    const auto patch = static_cast<Eigen::Index>(K + 1);
    const auto qq = static_cast<Eigen::Index>(q);

    // Per-case alignment blocks I - G G' with G = [1/sqrt(k), local tangent basis].
    std::vector<Matrix> blocks(n);
    parallel_for(n, [&](std::size_t i) {
        Matrix local(patch, X.values().cols());
        local.row(0) = X.row(i);
        const auto idx = nbrs.neighbors(i);
        for (Eigen::Index r = 1; r < patch; ++r) local.row(r) = X.row(idx[static_cast<std::size_t>(r - 1)]);
        local = local.rowwise() - local.colwise().mean();
        Matrix gram = local * local.transpose();
        gram.diagonal().array() += 1e-12 * gram.trace();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
        Matrix G(patch, qq + 1);
        G.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(patch)));
        for (Eigen::Index c = 0; c < qq; ++c) G.col(c + 1) = eig.eigenvectors().col(patch - 1 - c);
        blocks[i] = Matrix::Identity(patch, patch) - G * G.transpose();
    });

    const auto nn = static_cast<Eigen::Index>(n);
    Matrix alignment = Matrix::Zero(nn, nn);
    std::vector<Eigen::Index> members(static_cast<std::size_t>(patch));
    for (std::size_t i = 0; i < n; ++i) {
        members[0] = static_cast<Eigen::Index>(i);
        const auto idx = nbrs.neighbors(i);
        for (std::size_t r = 0; r < K; ++r) members[r + 1] = idx[r];
        for (Eigen::Index a = 0; a < patch; ++a) {
            for (Eigen::Index b = 0; b < patch; ++b) {
                alignment(members[static_cast<std::size_t>(a)], members[static_cast<std::size_t>(b)]) += blocks[i](a, b);
            }
        }
    }

    // Constants are an exact null vector; lift them above the spectrum so a
    // degenerate null space cannot mix them into the embedding.
    const double lift = alignment.trace() + 1.0;
    alignment.array() += lift / static_cast<double>(nn);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(alignment);
    Matrix vectors = eig.eigenvectors().leftCols(qq);
    vectors = vectors.rowwise() - vectors.colwise().mean();
    fix_signs(vectors);

    Diagnostics diag;
    diag.graph_components = 0;
    for (Eigen::Index c = 0; c < qq; ++c) diag.eigenvalues.push_back(eig.eigenvalues()(c));
    for (Eigen::Index c = qq; c < nn - 1 && diag.residual_eigenvalues.size() < kResidualEigenvalues; ++c) {
        diag.residual_eigenvalues.push_back(eig.eigenvalues()(c));
    }
    diag.output_normalized = true;
    diag.gram_deviation = (vectors.transpose() * vectors - Matrix::Identity(qq, qq)).cwiseAbs().maxCoeff();
    diag.notes.push_back("output is normalized (orthonormal columns); evaluate with the adjusted measures");
    return {DataMatrix(std::move(vectors)), ReducerConfig{Method::LTSA, q, K, std::nullopt}, std::move(diag)};
}

Embedding import_embedding(const std::filesystem::path& path, std::size_t expected_n) {
    Matrix m = io::read_matrix(path);
    if (static_cast<std::size_t>(m.rows()) != expected_n) {
        throw FormatError(path.string() + ": embedding has " + std::to_string(m.rows()) +
                          " rows, expected " + std::to_string(expected_n));
    }
    const auto q = static_cast<std::size_t>(m.cols());
    return {DataMatrix(std::move(m)), ReducerConfig{Method::External, q, 0, path}, Diagnostics{}};
}

Embedding reduce(const DataMatrix& X, const ReducerConfig& config) {
    switch (config.method) {
        case Method::PCA: return reduce_pca(X, config.q);
        case Method::Isomap: return reduce_isomap(X, config.q, config.K);
        case Method::LTSA: return reduce_ltsa(X, config.q, config.K);
        case Method::External:
            if (!config.external_path) throw ParameterError("external method needs a file path");
            return import_embedding(*config.external_path, X.n_cases());
    }
    throw ParameterError("unknown method");
}

}  // namespace lrc
