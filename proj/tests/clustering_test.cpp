#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "urfg/clustering.hpp"
#include "urfg/stats.hpp"

namespace {

urfg::Matrix euclidean_1d(const std::vector<double>& pts) {
    urfg::Matrix d(pts.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) d(i, j) = std::abs(pts[i] - pts[j]);
    return d;
}

TEST(AffinityToDistance, OneMinusAffinity) {
    urfg::AffinityMatrix aff;
    aff.values = urfg::Matrix(2, 2, 0.5);
    aff.values(0, 0) = aff.values(1, 1) = 1.0;
    urfg::Matrix d = urfg::affinity_to_distance(aff);
    EXPECT_DOUBLE_EQ(d(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(d(1, 1), 0.0);
    EXPECT_DOUBLE_EQ(d(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(d(1, 0), 0.5);
}

TEST(WardCluster, TrivialCuts) {
    urfg::Matrix d = euclidean_1d({0.0, 1.0, 5.0, 6.0});
    auto [every_own, dendro_a] = urfg::ward_cluster(d, 4);
    EXPECT_EQ(every_own.labels, (std::vector<int>{0, 1, 2, 3}));
    auto [all_one, dendro_b] = urfg::ward_cluster(d, 1);
    EXPECT_EQ(all_one.labels, (std::vector<int>{0, 0, 0, 0}));
    EXPECT_EQ(dendro_b.merges.size(), 3u);
}

TEST(WardCluster, SeparatedPairsGroupTogether) {
    urfg::Matrix d = euclidean_1d({0.0, 0.01, 10.0, 10.01});
    auto [assignment, dendro] = urfg::ward_cluster(d, 2);
    EXPECT_EQ(assignment.labels[0], assignment.labels[1]);
    EXPECT_EQ(assignment.labels[2], assignment.labels[3]);
    EXPECT_NE(assignment.labels[0], assignment.labels[2]);
    // first merges are the two tight pairs
    EXPECT_NEAR(dendro.merges[0].height, 0.01, 1e-9);
    EXPECT_NEAR(dendro.merges[1].height, 0.01, 1e-9);
}

TEST(WardCluster, InvariantToSampleOrder) {
    std::vector<double> pts{0.0, 0.2, 0.1, 5.0, 5.2, 5.1, 9.0, 9.1};
    urfg::Matrix d = euclidean_1d(pts);
    auto [base, dena] = urfg::ward_cluster(d, 3);

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(5);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> shuffled(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) shuffled[i] = pts[perm[i]];
    auto [permuted, denb] = urfg::ward_cluster(euclidean_1d(shuffled), 3);

    std::vector<int> unshuffled(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) unshuffled[perm[i]] = permuted.labels[i];
    EXPECT_DOUBLE_EQ(urfg::adjusted_rand_index(base.labels, unshuffled), 1.0);
}

TEST(WardCluster, CutAtPAndPPlusOneDifferByOneSplit) {
    std::vector<double> pts{0.0, 0.3, 0.1, 4.0, 4.2, 8.0, 8.3, 8.1};
    urfg::Matrix d = euclidean_1d(pts);
    auto [at3, den3] = urfg::ward_cluster(d, 3);
    auto [at4, den4] = urfg::ward_cluster(d, 4);
    // every cluster at p=4 must be contained in exactly one cluster at p=3
    std::map<int, std::set<int>> children;
    for (std::size_t i = 0; i < pts.size(); ++i)
        children[at3.labels[i]].insert(at4.labels[i]);
    std::size_t splits = 0;
    for (const auto& [parent, kids] : children) {
        EXPECT_LE(kids.size(), 2u);
        if (kids.size() == 2) ++splits;
    }
    EXPECT_EQ(splits, 1u);
}

TEST(WardCluster, RejectsBadInput) {
    urfg::Matrix d(3, 3, 0.0);
    d(0, 1) = 1.0;  // asymmetric
    EXPECT_THROW(urfg::ward_cluster(d, 2), std::invalid_argument);
    urfg::Matrix ok = euclidean_1d({0, 1, 2});
    EXPECT_THROW(urfg::ward_cluster(ok, 4), std::invalid_argument);
    EXPECT_THROW(urfg::ward_cluster(ok, 0), std::invalid_argument);
}

TEST(WardCluster, HeightsNonDecreasing) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(u(rng));
    auto [a, dendro] = urfg::ward_cluster(euclidean_1d(pts), 1);
    for (std::size_t i = 1; i < dendro.merges.size(); ++i)
        EXPECT_GE(dendro.merges[i].height + 1e-12, dendro.merges[i - 1].height);
}

}  // namespace
