#include "myopic/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace myopic {

using nlohmann::json;

static double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ObservationKernel::density(int s, double y) const {
    if (kind != Kind::gaussian) throw std::logic_error("density: discrete kernel");
    double z = (y - (s + 1)) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

int ObservationKernel::cell_of(double y) const {
    if (kind != Kind::gaussian) throw std::logic_error("cell_of: discrete kernel");
    auto it = std::upper_bound(edges.begin(), edges.end(), y);
    return static_cast<int>(it - edges.begin());
}

ObservationKernel make_gaussian_kernel(int num_states, double sigma, int bins) {
    if (num_states < 1 || sigma <= 0.0 || bins < 2)
        throw std::invalid_argument("make_gaussian_kernel: bad parameters");
    ObservationKernel k;
    k.kind = ObservationKernel::Kind::gaussian;
    k.sigma = sigma;
    k.bins = bins;
    // Equal-probability cells under the uniform mixture of N(s, sigma), s = 1..X.
    auto mix_cdf = [&](double t) {
        double s = 0.0;
        for (int x = 1; x <= num_states; ++x) s += normal_cdf((t - x) / sigma);
        return s / num_states;
    };
    k.edges.resize(bins - 1);
    for (int i = 1; i < bins; ++i) {
        double lo = 1.0 - 10.0 * sigma, hi = num_states + 10.0 * sigma;
        double target = static_cast<double>(i) / bins;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            (mix_cdf(mid) < target ? lo : hi) = mid;
        }
        k.edges[i - 1] = 0.5 * (lo + hi);
    }
    k.probs = Matrix(num_states, bins);
    for (int s = 0; s < num_states; ++s) {
        double prev = 0.0;
        for (int y = 0; y < bins; ++y) {
            double cur = (y == bins - 1) ? 1.0 : normal_cdf((k.edges[y] - (s + 1)) / sigma);
            k.probs(s, y) = cur - prev;
            prev = cur;
        }
    }
    return k;
}

// Printed benchmark matrices carry 4-decimal truncation. Residuals up to 1e-3
// are absorbed into the largest row entry; anything larger renormalizes the row.
static void fix_rows(Matrix& m, double absorb_tol = 1e-3) {
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        int jmax = 0;
        for (int j = 0; j < m.cols; ++j) {
            s += m(i, j);
            if (m(i, j) > m(i, jmax)) jmax = j;
        }
        if (std::abs(s - 1.0) <= absorb_tol) {
            m(i, jmax) += 1.0 - s;
        } else if (s > 0.0) {
            for (int j = 0; j < m.cols; ++j) m(i, j) /= s;
        }
    }
}

static Matrix from_rows(int r, int c, const double* v) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = v[i * c + j];
    return m;
}

static PomdpModel example1() {
    static const double p2[] = {1.0,    0,      0,       //
                                0.4677, 0.4149, 0.1174,  //
                                0.3302, 0.5220, 0.1478};
    static const double b1[] = {0.6373, 0.3405, 0.0222,  //
                                0.3118, 0.6399, 0.0483,  //
                                0.0422, 0.8844, 0.0734};
    static const double b2[] = {0.5927, 0.3829, 0.0244,  //
                                0.4986, 0.4625, 0.0389,  //
                                0.1395, 0.7900, 0.0705};
    static const double c[] = {1.0000, 1.5002,  //
                               1.5045, 1.0000,  //
                               1.8341, 1.0000};
    PomdpModel m;
    m.num_states = 3;
    m.num_actions = 2;
    m.discount = 0.5;
    Matrix P2 = from_rows(3, 3, p2);
    fix_rows(P2);
    Matrix P1 = mat_mul(P2, P2);
    fix_rows(P1);
    m.transitions = {P1, P2};
    ObservationKernel k1, k2;
    k1.probs = from_rows(3, 3, b1);
    k2.probs = from_rows(3, 3, b2);
    fix_rows(k1.probs);
    fix_rows(k2.probs);
    m.observations = {k1, k2};
    m.costs = from_rows(3, 2, c);
    return m;
}

static PomdpModel example2(bool gaussian, int gaussian_bins) {
    static const double b[] = {
        0.0297, 0.1334, 0.1731, 0.0482, 0.1329, 0.1095, 0.0926, 0.0348, 0.1067, 0.1391,  //
        0.0030, 0.0271, 0.0558, 0.0228, 0.0845, 0.0923, 0.1029, 0.0511, 0.2001, 0.3604,  //
        0.0003, 0.0054, 0.0169, 0.0094, 0.0444, 0.0599, 0.0812, 0.0487, 0.2263, 0.5075,  //
        0,      0.0011, 0.0051, 0.0038, 0.0225, 0.0368, 0.0593, 0.0418, 0.2250, 0.6046,  //
        0,      0.0002, 0.0015, 0.0015, 0.0113, 0.0223, 0.0423, 0.0345, 0.2133, 0.6731,  //
        0,      0,      0.0005, 0.0006, 0.0056, 0.0134, 0.0298, 0.0281, 0.1977, 0.7243,  //
        0,      0,      0.0001, 0.0002, 0.0028, 0.0081, 0.0210, 0.0227, 0.1813, 0.7638,  //
        0,      0,      0,      0.0001, 0.0014, 0.0048, 0.0147, 0.0183, 0.1651, 0.7956,  //
        0,      0,      0,      0,      0.0007, 0.0029, 0.0103, 0.0147, 0.1497, 0.8217,  //
        0,      0,      0,      0,      0.0004, 0.0017, 0.0072, 0.0118, 0.1355, 0.8434};
    static const double p1[] = {
        0.9496, 0.0056, 0.0056, 0.0056, 0.0056, 0.0056, 0.0056, 0.0056, 0.0056, 0.0056,  //
        0.9023, 0.0081, 0.0112, 0.0112, 0.0112, 0.0112, 0.0112, 0.0112, 0.0112, 0.0112,  //
        0.8574, 0.0097, 0.0166, 0.0166, 0.0166, 0.0166, 0.0166, 0.0166, 0.0166, 0.0167,  //
        0.8145, 0.0109, 0.0218, 0.0218, 0.0218, 0.0218, 0.0218, 0.0218, 0.0218, 0.0220,  //
        0.7737, 0.0119, 0.0268, 0.0268, 0.0268, 0.0268, 0.0268, 0.0268, 0.0268, 0.0268,  //
        0.7351, 0.0126, 0.0315, 0.0315, 0.0315, 0.0315, 0.0315, 0.0315, 0.0315, 0.0318,  //
        0.6981, 0.0131, 0.0361, 0.0361, 0.0361, 0.0361, 0.0361, 0.0361, 0.0361, 0.0361,  //
        0.6632, 0.0136, 0.0404, 0.0404, 0.0404, 0.0404, 0.0404, 0.0404, 0.0404, 0.0404,  //
        0.6301, 0.0139, 0.0445, 0.0445, 0.0445, 0.0445, 0.0445, 0.0445, 0.0445, 0.0445,  //
        0.5987, 0.0141, 0.0484, 0.0484, 0.0484, 0.0484, 0.0484, 0.0484, 0.0484, 0.0484};
    static const double p2[] = {
        0.5688, 0.0143, 0.0521, 0.0521, 0.0521, 0.0521, 0.0521, 0.0521, 0.0521, 0.0522,  //
        0.5400, 0.0144, 0.0557, 0.0557, 0.0557, 0.0557, 0.0557, 0.0557, 0.0557, 0.0557,  //
        0.5133, 0.0145, 0.0590, 0.0590, 0.0590, 0.0590, 0.0590, 0.0590, 0.0590, 0.0592,  //
        0.4877, 0.0145, 0.0622, 0.0622, 0.0622, 0.0622, 0.0622, 0.0622, 0.0622, 0.0624,  //
        0.4631, 0.0145, 0.0653, 0.0653, 0.0653, 0.0653, 0.0653, 0.0653, 0.0653, 0.0653,  //
        0.4400, 0.0144, 0.0682, 0.0682, 0.0682, 0.0682, 0.0682, 0.0682, 0.0682, 0.0682,  //
        0.4181, 0.0144, 0.0709, 0.0709, 0.0709, 0.0709, 0.0709, 0.0709, 0.0709, 0.0712,  //
        0.3969, 0.0143, 0.0736, 0.0736, 0.0736, 0.0736, 0.0736, 0.0736, 0.0736, 0.0736,  //
        0.3771, 0.0141, 0.0761, 0.0761, 0.0761, 0.0761, 0.0761, 0.0761, 0.0761, 0.0761,  //
        0.3585, 0.0140, 0.0784, 0.0784, 0.0784, 0.0784, 0.0784, 0.0784, 0.0784, 0.0787};
    // costs printed as an A x X block; transposed here to X x A
    static const double craw[] = {
        0.5986, 0.5810, 0.6116, 0.6762, 0.5664, 0.6188, 0.7107, 0.4520, 0.5986, 0.7714,  //
        0.6986, 0.6727, 0.7017, 0.7649, 0.6536, 0.6005, 0.6924, 0.4324, 0.5790, 0.6714};
    PomdpModel m;
    m.num_states = 10;
    m.num_actions = 2;
    m.discount = 0.5;
    Matrix P1 = from_rows(10, 10, p1), P2 = from_rows(10, 10, p2);
    fix_rows(P1);
    fix_rows(P2);
    m.transitions = {P1, P2};
    if (gaussian) {
        ObservationKernel k = make_gaussian_kernel(10, 1.0, gaussian_bins);
        m.observations = {k, k};
    } else {
        ObservationKernel k;
        k.probs = from_rows(10, 10, b);
        fix_rows(k.probs);
        m.observations = {k, k};
    }
    m.costs = Matrix(10, 2);
    for (int x = 0; x < 10; ++x)
        for (int a = 0; a < 2; ++a) m.costs(x, a) = craw[a * 10 + x];
    return m;
}

static PomdpModel example3() {
    static const double pall[] = {
        // action 1
        0.1851, 0.1692, 0.1630, 0.1546, 0.1324, 0.0889, 0.0546, 0.0522,  //
        0.1538, 0.1531, 0.1601, 0.1580, 0.1395, 0.0994, 0.0667, 0.0694,  //
        0.1307, 0.1378, 0.1489, 0.1595, 0.1472, 0.1143, 0.0769, 0.0847,  //
        0.1157, 0.1307, 0.1437, 0.1591, 0.1496, 0.1199, 0.0840, 0.0973,  //
        0.1053, 0.1196, 0.1388, 0.1579, 0.1520, 0.1248, 0.0888, 0.1128,  //
        0.0850, 0.1056, 0.1326, 0.1618, 0.1585, 0.1348, 0.0977, 0.1240,  //
        0.0707, 0.0906, 0.1217, 0.1578, 0.1629, 0.1447, 0.1078, 0.1438,  //
        0.0549, 0.0757, 0.1095, 0.1502, 0.1666, 0.1576, 0.1189, 0.1666,  //
        // action 2
        0.0488, 0.0696, 0.1016, 0.1413, 0.1599, 0.1614, 0.1270, 0.1904,  //
        0.0413, 0.0604, 0.0882, 0.1292, 0.1503, 0.1661, 0.1425, 0.2220,  //
        0.0329, 0.0482, 0.0752, 0.1195, 0.1525, 0.1694, 0.1519, 0.2504,  //
        0.0248, 0.0388, 0.0649, 0.1097, 0.1503, 0.1732, 0.1643, 0.2740,  //
        0.0196, 0.0309, 0.0566, 0.0985, 0.1429, 0.1805, 0.1745, 0.2965,  //
        0.0158, 0.0258, 0.0517, 0.0934, 0.1392, 0.1785, 0.1794, 0.3162,  //
        0.0134, 0.0221, 0.0463, 0.0844, 0.1335, 0.1714, 0.1822, 0.3467,  //
        0.0110, 0.0186, 0.0406, 0.0783, 0.1246, 0.1679, 0.1899, 0.3691,  //
        // action 3
        0.0077, 0.0140, 0.0337, 0.0704, 0.1178, 0.1632, 0.1983, 0.3949,  //
        0.0058, 0.0117, 0.0297, 0.0659, 0.1122, 0.1568, 0.1954, 0.4225,  //
        0.0041, 0.0090, 0.0244, 0.0581, 0.1011, 0.1494, 0.2013, 0.4526,  //
        0.0032, 0.0076, 0.0210, 0.0515, 0.0941, 0.1400, 0.2023, 0.4803,  //
        0.0022, 0.0055, 0.0165, 0.0439, 0.0865, 0.1328, 0.2006, 0.5120,  //
        0.0017, 0.0044, 0.0132, 0.0362, 0.0751, 0.1264, 0.2046, 0.5384,  //
        0.0012, 0.0033, 0.0106, 0.0317, 0.0702, 0.1211, 0.1977, 0.5642,  //
        0.0009, 0.0025, 0.0091, 0.0273, 0.0638, 0.1134, 0.2004, 0.5826,  //
        // action 4
        0.0007, 0.0020, 0.0075, 0.0244, 0.0609, 0.1104, 0.2013, 0.5928,  //
        0.0005, 0.0016, 0.0063, 0.0208, 0.0527, 0.1001, 0.1991, 0.6189,  //
        0.0004, 0.0013, 0.0049, 0.0177, 0.0468, 0.0923, 0.1981, 0.6385,  //
        0.0003, 0.0009, 0.0038, 0.0149, 0.0407, 0.0854, 0.2010, 0.6530,  //
        0.0002, 0.0007, 0.0031, 0.0123, 0.0346, 0.0781, 0.2022, 0.6688,  //
        0.0001, 0.0005, 0.0023, 0.0100, 0.0303, 0.0713, 0.1980, 0.6875,  //
        0.0001, 0.0004, 0.0019, 0.0083, 0.0266, 0.0683, 0.1935, 0.7009,  //
        0.0001, 0.0003, 0.0014, 0.0069, 0.0240, 0.0651, 0.1878, 0.7144,  //
        // action 5
        0.0000, 0.0002, 0.0010, 0.0054, 0.0204, 0.0590, 0.1772, 0.7368,  //
        0.0000, 0.0001, 0.0008, 0.0041, 0.0168, 0.0515, 0.1663, 0.7604,  //
        0.0000, 0.0001, 0.0006, 0.0038, 0.0156, 0.0480, 0.1596, 0.7723,  //
        0.0000, 0.0001, 0.0005, 0.0032, 0.0139, 0.0450, 0.1603, 0.7770,  //
        0.0000, 0.0001, 0.0004, 0.0028, 0.0124, 0.0418, 0.1590, 0.7835,  //
        0.0000, 0.0001, 0.0003, 0.0023, 0.0106, 0.0389, 0.1547, 0.7931,  //
        0.0000, 0.0000, 0.0003, 0.0018, 0.0090, 0.0351, 0.1450, 0.8088,  //
        0.0000, 0.0000, 0.0002, 0.0015, 0.0080, 0.0325, 0.1386, 0.8192,  //
        // action 6
        0.0000, 0.0000, 0.0001, 0.0012, 0.0067, 0.0296, 0.1331, 0.8293,  //
        0.0000, 0.0000, 0.0001, 0.0010, 0.0059, 0.0275, 0.1238, 0.8417,  //
        0.0000, 0.0000, 0.0001, 0.0009, 0.0056, 0.0272, 0.1238, 0.8424,  //
        0.0000, 0.0000, 0.0001, 0.0009, 0.0053, 0.0269, 0.1234, 0.8434,  //
        0.0000, 0.0000, 0.0001, 0.0006, 0.0043, 0.0237, 0.1189, 0.8524,  //
        0.0000, 0.0000, 0.0001, 0.0005, 0.0038, 0.0215, 0.1129, 0.8612,  //
        0.0000, 0.0000, 0.0000, 0.0004, 0.0032, 0.0191, 0.1094, 0.8679,  //
        0.0000, 0.0000, 0.0000, 0.0003, 0.0025, 0.0161, 0.1011, 0.8800,  //
        // action 7
        0.0000, 0.0000, 0.0000, 0.0003, 0.0022, 0.0143, 0.0938, 0.8894,  //
        0.0000, 0.0000, 0.0000, 0.0002, 0.0019, 0.0136, 0.0901, 0.8942,  //
        0.0000, 0.0000, 0.0000, 0.0002, 0.0017, 0.0126, 0.0849, 0.9006,  //
        0.0000, 0.0000, 0.0000, 0.0002, 0.0015, 0.0118, 0.0819, 0.9046,  //
        0.0000, 0.0000, 0.0000, 0.0001, 0.0013, 0.0108, 0.0754, 0.9124,  //
        0.0000, 0.0000, 0.0000, 0.0001, 0.0011, 0.0098, 0.0714, 0.9176,  //
        0.0000, 0.0000, 0.0000, 0.0001, 0.0010, 0.0090, 0.0713, 0.9186,  //
        0.0000, 0.0000, 0.0000, 0.0001, 0.0009, 0.0084, 0.0675, 0.9231,  //
        // action 8
        0.0000, 0.0000, 0.0000, 0.0001, 0.0008, 0.0078, 0.0665, 0.9248,  //
        0.0000, 0.0000, 0.0000, 0.0000, 0.0007, 0.0068, 0.0626, 0.9299,  //
        0.0000, 0.0000, 0.0000, 0.0000, 0.0006, 0.0061, 0.0581, 0.9352,  //
        0.0000, 0.0000, 0.0000, 0.0000, 0.0005, 0.0057, 0.0561, 0.9377,  //
        0.0000, 0.0000, 0.0000, 0.0000, 0.0005, 0.0053, 0.0558, 0.9384,  //
        0.0000, 0.0000, 0.0000, 0.0000, 0.0004, 0.0051, 0.0558, 0.9387,  //
        0.0000, 0.0000, 0.0000, 0.0000, 0.0004, 0.0045, 0.0522, 0.9429,  //
        0.0000, 0.0000, 0.0000, 0.0000, 0.0003, 0.0040, 0.0505, 0.9452};
    // cost rows are states, columns actions
    static const double c[] = {
        1.0000,   2.2486,  4.1862,  6.9509,  11.2709, 15.9589, 21.4617, 27.6965,  //
        31.3230,  8.8185,  9.6669,  11.4094, 14.2352, 17.8532, 22.3155, 27.5353,  //
        50.0039,  26.3162, 14.6326, 15.3534, 17.1427, 19.7455, 23.1064, 27.3025,  //
        65.0359,  40.2025, 27.5380, 19.5840, 20.3017, 21.8682, 24.2022, 27.4108,  //
        79.1544,  53.1922, 39.5408, 30.5670, 23.3697, 23.9185, 25.1941, 27.4021,  //
        90.7494,  63.6983, 48.6593, 38.6848, 30.4868, 25.7601, 26.0012, 27.1867,  //
        99.1985,  71.1173, 55.0183, 44.0069, 34.7860, 29.0205, 26.9721, 27.1546,  //
        106.3851, 77.2019, 60.0885, 47.8917, 37.6330, 30.8279, 27.7274, 26.4338};
    PomdpModel m;
    m.num_states = 8;
    m.num_actions = 8;
    m.discount = 0.5;
    for (int a = 0; a < 8; ++a) {
        Matrix P = from_rows(8, 8, pall + 64 * a);
        fix_rows(P);
        m.transitions.push_back(P);
    }
    // tridiagonal observation kernel: 0.7 on the diagonal, remainder split
    // between the neighbours (all of it at the boundary states)
    double eps = 0.7;
    ObservationKernel k;
    k.probs = Matrix(8, 8);
    for (int i = 0; i < 8; ++i) {
        k.probs(i, i) = eps;
        if (i == 0)
            k.probs(0, 1) = 1.0 - eps;
        else if (i == 7)
            k.probs(7, 6) = 1.0 - eps;
        else {
            k.probs(i, i - 1) = (1.0 - eps) / 2.0;
            k.probs(i, i + 1) = (1.0 - eps) / 2.0;
        }
    }
    m.observations.assign(8, k);
    m.costs = from_rows(8, 8, c);
    return m;
}

static PomdpModel example4(double theta1, double theta2, int gaussian_bins) {
    if (!(theta1 >= 0.0 && theta1 <= theta2 && theta2 <= 0.5))
        throw std::invalid_argument("example 4 requires 0 <= theta1 <= theta2 <= 0.5");
    PomdpModel m;
    m.num_states = 3;
    m.num_actions = 2;
    m.discount = 0.5;
    Matrix P2(3, 3);
    P2(0, 0) = 1.0;
    P2(1, 0) = 1.0 - 2.0 * theta1;
    P2(1, 1) = theta1;
    P2(1, 2) = theta1;
    P2(2, 0) = 1.0 - 2.0 * theta2;
    P2(2, 1) = theta2;
    P2(2, 2) = theta2;
    m.transitions = {mat_mul(P2, P2), P2};
    ObservationKernel k = make_gaussian_kernel(3, 1.0, gaussian_bins);
    m.observations = {k, k};
    static const double c[] = {1.0, 1.2,  //
                               1.1, 1.1,  //
                               1.2, 1.1};
    m.costs = from_rows(3, 2, c);
    return m;
}

PomdpModel builtin_example(const std::string& id, double theta1, double theta2, int gaussian_bins) {
    if (id == "1") return example1();
    if (id == "2d" || id == "2-discrete") return example2(false, gaussian_bins);
    if (id == "2g" || id == "2-gaussian") return example2(true, gaussian_bins);
    if (id == "3") return example3();
    if (id == "4") return example4(theta1, theta2, gaussian_bins);
    throw std::invalid_argument("unknown builtin example id: " + id);
}

ValidationReport validate_model(const PomdpModel& m, double tol) {
    ValidationReport rep;
    auto bad = [&](const std::string& field, const std::string& msg) {
        rep.issues.push_back({field, msg});
    };
    if (m.num_states < 2) bad("num_states", "need at least 2 states");
    if (m.num_actions < 1) bad("num_actions", "need at least 1 action");
    if (!(m.discount >= 0.0 && m.discount < 1.0)) bad("discount", "must lie in [0, 1)");
    if (static_cast<int>(m.transitions.size()) != m.num_actions)
        bad("transitions", "expected one matrix per action");
    if (static_cast<int>(m.observations.size()) != m.num_actions)
        bad("observations", "expected one kernel per action");
    if (m.costs.rows != m.num_states || m.costs.cols != m.num_actions)
        bad("costs", "expected num_states x num_actions matrix");
    for (int i = 0; i < m.costs.rows; ++i)
        for (int j = 0; j < m.costs.cols; ++j)
            if (!std::isfinite(m.costs(i, j))) bad("costs", "non-finite entry");

    auto check_stochastic = [&](const Matrix& p, const std::string& field) {
        for (int i = 0; i < p.rows; ++i) {
            double s = 0.0;
            bool neg = false, fin = true;
            for (int j = 0; j < p.cols; ++j) {
                double v = p(i, j);
                if (!std::isfinite(v)) fin = false;
                if (v < -tol) neg = true;
                s += v;
            }
            std::string row = field + " row " + std::to_string(i + 1);
            if (!fin) bad(row, "non-finite entry");
            if (neg) bad(row, "negative entry");
            if (std::abs(s - 1.0) > tol) bad(row, "sums to " + std::to_string(s) + ", not 1");
        }
    };
    for (size_t a = 0; a < m.transitions.size(); ++a) {
        const Matrix& p = m.transitions[a];
        std::string field = "transitions[" + std::to_string(a + 1) + "]";
        if (p.rows != m.num_states || p.cols != m.num_states) {
            bad(field, "expected num_states x num_states matrix");
            continue;
        }
        check_stochastic(p, field);
    }
    int y0 = -1;
    for (size_t a = 0; a < m.observations.size(); ++a) {
        const ObservationKernel& k = m.observations[a];
        std::string field = "observations[" + std::to_string(a + 1) + "]";
        if (k.probs.rows != m.num_states) {
            bad(field, "kernel rows must equal num_states");
            continue;
        }
        if (k.probs.cols < 1) {
            bad(field, "kernel needs at least one observation");
            continue;
        }
        if (y0 < 0) y0 = k.probs.cols;
        if (k.probs.cols != y0) bad(field, "all kernels must share the observation count");
        if (k.kind == ObservationKernel::Kind::gaussian) {
            if (k.sigma <= 0.0) bad(field, "gaussian sigma must be positive");
            if (k.bins != k.probs.cols) bad(field, "gaussian bins must match kernel columns");
            if (static_cast<int>(k.edges.size()) != k.bins - 1) bad(field, "bad cell edges");
            for (size_t i = 1; i < k.edges.size(); ++i)
                if (!(k.edges[i - 1] < k.edges[i])) bad(field, "cell edges must increase");
        }
        check_stochastic(k.probs, field);
    }
    return rep;
}

// ---- JSON ----

static json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols; ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

static Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ModelParseError(field + ": expected an array of rows");
    int r = static_cast<int>(j.size());
    int c = static_cast<int>(j[0].size());
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != c)
            throw ModelParseError(field + ": ragged rows");
        for (int k = 0; k < c; ++k) {
            if (!j[i][k].is_number()) throw ModelParseError(field + ": non-numeric entry");
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

static json kernel_to_json(const ObservationKernel& k) {
    json o;
    if (k.kind == ObservationKernel::Kind::gaussian) {
        o["type"] = "gaussian";
        o["sigma"] = k.sigma;
        o["bins"] = k.bins;
    } else {
        o["type"] = "discrete";
        o["probs"] = matrix_to_json(k.probs);
    }
    return o;
}

static ObservationKernel kernel_from_json(const json& j, int num_states, const std::string& field) {
    if (!j.is_object() || !j.contains("type"))
        throw ModelParseError(field + ": expected an object with a \"type\"");
    std::string type = j["type"].get<std::string>();
    if (type == "discrete") {
        if (!j.contains("probs")) throw ModelParseError(field + ": discrete kernel needs \"probs\"");
        ObservationKernel k;
        k.probs = matrix_from_json(j["probs"], field + ".probs");
        return k;
    }
    if (type == "gaussian") {
        if (!j.contains("sigma")) throw ModelParseError(field + ": gaussian kernel needs \"sigma\"");
        double sigma = j["sigma"].get<double>();
        int bins = j.value("bins", 64);
        if (sigma <= 0.0) throw ModelParseError(field + ".sigma: must be positive");
        if (bins < 2) throw ModelParseError(field + ".bins: must be at least 2");
        return make_gaussian_kernel(num_states, sigma, bins);
    }
    throw ModelParseError(field + ".type: must be \"discrete\" or \"gaussian\"");
}

PomdpModel load_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ModelParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ModelParseError("top level: expected an object");
    for (const char* req : {"num_states", "num_actions", "discount", "transitions", "observations", "costs"})
        if (!j.contains(req)) throw ModelParseError(std::string(req) + ": missing");

    PomdpModel m;
    try {
        m.num_states = j["num_states"].get<int>();
        m.num_actions = j["num_actions"].get<int>();
        m.discount = j["discount"].get<double>();
    } catch (const json::exception& e) {
        throw ModelParseError(std::string("header fields: ") + e.what());
    }
    const json& jt = j["transitions"];
    if (!jt.is_array()) throw ModelParseError("transitions: expected an array of matrices");
    for (size_t a = 0; a < jt.size(); ++a)
        m.transitions.push_back(matrix_from_json(jt[a], "transitions[" + std::to_string(a + 1) + "]"));
    const json& jo = j["observations"];
    if (jo.is_object()) {
        ObservationKernel k = kernel_from_json(jo, m.num_states, "observations");
        m.observations.assign(std::max(m.num_actions, 1), k);
    } else if (jo.is_array()) {
        for (size_t a = 0; a < jo.size(); ++a)
            m.observations.push_back(
                kernel_from_json(jo[a], m.num_states, "observations[" + std::to_string(a + 1) + "]"));
    } else {
        throw ModelParseError("observations: expected an object or an array");
    }
    m.costs = matrix_from_json(j["costs"], "costs");

    ValidationReport rep = validate_model(m);
    if (!rep.ok()) {
        std::ostringstream os;
        os << "model fails validation:";
        for (const auto& is : rep.issues) os << " [" << is.field << ": " << is.message << "]";
        throw ModelParseError(os.str());
    }
    return m;
}

PomdpModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

std::string serialize_model(const PomdpModel& m) {
    json j;
    j["num_states"] = m.num_states;
    j["num_actions"] = m.num_actions;
    j["discount"] = m.discount;
    json jt = json::array();
    for (const Matrix& p : m.transitions) jt.push_back(matrix_to_json(p));
    j["transitions"] = jt;
    bool shared = true;
    for (size_t a = 1; a < m.observations.size(); ++a)
        if (m.observations[a].probs.a != m.observations[0].probs.a) shared = false;
    if (shared && !m.observations.empty()) {
        j["observations"] = kernel_to_json(m.observations[0]);
    } else {
        json jo = json::array();
        for (const auto& k : m.observations) jo.push_back(kernel_to_json(k));
        j["observations"] = jo;
    }
    j["costs"] = matrix_to_json(m.costs);
    return j.dump(2);
}

}  // namespace myopic
