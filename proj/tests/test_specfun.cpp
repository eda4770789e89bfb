#include "doctest.h"

#include <cmath>
#include <limits>

#include "qsrc/specfun.hpp"

using namespace qsrc::specfun;

namespace {

struct Golden {
    double x, ai, aip, bi, bip;
};

// Frozen from tests/oracles/airy_goldens.py (mpmath, 40 digits).
const Golden kGoldens[] = {
    {0.0, 0.3550280538878172392601, -0.2588194037928067984052, 0.6149266274460007351509, 0.4482883573538263579148},
    {1e-4, 0.3550021719474971277645, -0.2588194020177528021006, 0.6149714562818386092958, 0.4482883604286089245975},
    {0.5, 0.2316936064808334897691, -0.224910532664683893136, 0.8542770431031554933, 0.5445725641405923018272},
    {-0.5, 0.4757280916105395887986, -0.2040816703395473861448, 0.3803526597510538501697, 0.5059337136238471665703},
    {1.0, 0.1352924163128814155241, -0.1591474412967932127875, 1.207423594952871259436, 0.9324359333927756329595},
    {-1.0, 0.5355608832923521187995, -0.01016056711664520939505, 0.1039973894969446118887, 0.5923756264227923508168},
    {2.5, 0.01572592338047048999527, -0.0262508810359032303649, 6.481660738460578608073, 9.421423317334301755582},
    {-2.5, -0.1123250676929660891875, 0.6788527342647943633721, -0.4324224718407052930284, -0.2204201548746295876834},
    {3.5999, 0.002126895834091377917723, -0.004171897341196312658381, 39.58551310661057534668, 72.01254845179684934571},
    {3.6001, 0.00212606160773819760131, -0.004170366276538407710242, 39.59991846677718090016, 72.04105520686920260461},
    {4.2, 0.0006274958683091631401828, -0.001321000663887686087215, 124.0380098686421505723, 246.1459917117856851527},
    {5.0, 0.0001083444281360744173499, -0.0002474138908684624760002, 657.7920441711711824411, 1435.819080217982518672},
    {-5.0, 0.350761009024114319788, 0.3271928185544431367949, -0.13836913490160057685, 0.7784117730018992460944},
    {6.5, 2.79588234320491358546e-6, -7.231931466601792559814e-6, 22340.60771839699815794, 56062.49584252286074822},
    {7.9999, 4.693549243102544891216e-8, -1.341814725832099916152e-7, 1199250.617871954383909, 3353382.784098951431122},
    {8.0001, 4.690866364472529925208e-8, -1.341063972604410038704e-7, 1199921.486343846503049, 3355302.121733373490267},
    {8.9999, 2.471916606224843255654e-9, -7.482865765550616229912e-9, 21466489.10863709098509, 63788167.17729622352538},
    {9.0001, 2.470420477925296751773e-9, -7.478417662313321661247e-9, 21479250.60679182297946, 63826818.34192302286389},
    {10.0, 1.104753255289868593355e-10, -3.520633676738923636621e-10, 455641153.5482251409998, 1429236134.482865776119},
    {-10.0, 0.04024123848644319068943, 0.9962650441327900559046, -0.3146798296438386331618, 0.1194141133999092382775},
    {-4.7999, 0.380032991011574254134, -0.03694751913314157845114, 0.02579130172327138419817, 0.8350773987415110407392},
    {-4.8001, 0.3800403440322512032197, -0.03658268392645951912822, 0.02562428377292023492734, 0.8351020782223873003938},
    {-7.5, 0.3217757163806478752673, 0.3188095066985545962101, -0.1124634850764908063843, 0.8778022815457609223676},
    {-11.9999, -0.06645286001778341243206, 1.023190257857377054252, -0.2957435675542373909498, -0.236377321218474417753},
    {-12.0001, -0.06665748210434190284314, 1.02303052543975950577, -0.2956962211155196321152, -0.2370870489931077618546},
    {-15.0, 0.2782174908708289295276, 0.2723742043086420208258, -0.06912659453101006118593, 1.076429753084374786744},
    {12.0, 1.393184688875360839049e-13, -4.854736554985308462994e-13, 329807225829.0741761848, 1135507502443.370742404},
    {20.0, 1.691672868670540313554e-27, -7.586391625748354960515e-27, 2.103765049651103814495e25, 9.381839336133964349106e25},
    {-20.0, -0.1764061270779846895902, 0.8928628567364712383984, -0.2001393093226513492836, -0.7914290338395364793563},
    {40.0, 6.365742658552914909567e-75, -4.030017977600678042293e-74, 3.953139302438593533534e72, 2.497707968170696874972e73},
    {-50.0, -0.1618814236123209239152, 0.9689898372767490871365, -0.1371501521288200733796, -1.145361700265477600264},
    {90.0, 5.71516340800159671244e-249, -5.423466456130726114848e-248, 2.935420465340391729728e246, 2.783968375723013216052e247},
    {-200.0, 0.1488939424838102511513, -0.2600066454334060227629, 0.01839840634261779333667, 2.105701367289785444049},
};

// mixed absolute-or-relative error, the metric used throughout
double err_metric(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

} // namespace

TEST_CASE("airy golden values") {
    for (const auto& g : kGoldens) {
        AiryPair p = airy(g.x);
        const double tol = (std::abs(g.x) <= 10.0) ? 1e-10 : 1e-8;
        INFO("x = " << g.x);
        CHECK(err_metric(p.ai, g.ai) < tol);
        CHECK(err_metric(p.ai_prime, g.aip) < tol);
        CHECK(err_metric(p.bi, g.bi) < tol);
        CHECK(err_metric(p.bi_prime, g.bip) < tol);
        // relative accuracy of the decaying Ai branch matters for tunneling tails
        if (g.x > 0 && g.x <= 90.0) {
            CHECK(std::abs(p.ai - g.ai) < 1e-8 * std::abs(g.ai));
            CHECK(std::abs(p.ai_prime - g.aip) < 1e-8 * std::abs(g.aip));
        }
    }
}

TEST_CASE("airy scaled golden values") {
    const Golden scaled[] = {
        {10.0, 0.1581236668543461502767, -0.5039093607113109261716, 0.3183401053367344452505, 0.9985559426738374008966},
        {25.0, 0.1260521620316069586253, -0.6315151034418479822809, 0.2525248792945537982897, 1.260086367059875230159},
        {60.0, 0.1013351402975255494256, -0.7853602852820239486773, 0.2027611508221040574238, 1.569735142843787786539},
        {104.0, 0.08832712791687261999865, -0.9009756975376109333243, 0.176688959547920188167, 1.801455921420414230933},
        {150.0, 0.08060233779162403673783, -0.9873072898891082809164, 0.1612229576075258488011, 1.974301108384655396808},
        {200.0, 0.07501041684381093190574, -1.060901230510904138381, 0.1500318841741814785106, 2.121583672557109940205},
    };
    for (const auto& g : scaled) {
        AiryScaled s = airy_scaled(g.x);
        INFO("x = " << g.x);
        CHECK(std::abs(s.ai - g.ai) < 1e-10 * std::abs(g.ai));
        CHECK(std::abs(s.ai_prime - g.aip) < 1e-10 * std::abs(g.aip));
        CHECK(std::abs(s.bi - g.bi) < 1e-10 * std::abs(g.bi));
        CHECK(std::abs(s.bi_prime - g.bip) < 1e-10 * std::abs(g.bip));
        CHECK(s.xi == doctest::Approx(2.0 / 3.0 * std::pow(g.x, 1.5)).epsilon(1e-14));
    }
}

TEST_CASE("wronskian on [-10, 10]") {
    for (int i = 0; i <= 400; ++i) {
        double x = -10.0 + 0.05 * i;
        AiryPair p = airy(x);
        double w = p.ai * p.bi_prime - p.ai_prime * p.bi;
        INFO("x = " << x);
        CHECK(std::abs(w - M_1_PI) <= 1e-10);
    }
}

TEST_CASE("airy ODE residual, 5-point stencil at h = 1e-3") {
    const double h = 1e-3;
    for (int i = 0; i <= 100; ++i) {
        double x = -10.0 + 0.2 * i;
        double fm2 = airy(x - 2 * h).ai;
        double fm1 = airy(x - h).ai;
        double f0 = airy(x).ai;
        double fp1 = airy(x + h).ai;
        double fp2 = airy(x + 2 * h).ai;
        double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        INFO("x = " << x);
        CHECK(std::abs(d2 - x * f0) <= 1e-8);
    }
}

TEST_CASE("large-x decay asymptote") {
    // ai * e^{+xi} * 2 sqrt(pi) x^{1/4} -> 1.  The exact first correction is
    // -5/(72 xi), i.e. 4.6e-3 at x = 8; the 1e-3 band is reached for x >= 23.
    double prev = 1.0;
    for (double x : {8.0, 10.0, 14.0, 20.0, 23.0, 40.0, 80.0}) {
        AiryPair p = airy(x);
        double xi = 2.0 / 3.0 * std::pow(x, 1.5);
        double ratio = p.ai * std::exp(xi) * 2.0 * std::sqrt(M_PI) * std::pow(x, 0.25);
        CHECK(std::abs(ratio - 1.0) < 5e-3);          // envelope already tight at 8
        CHECK(std::abs(ratio - 1.0) <= prev + 1e-15); // monotone approach
        if (x >= 23.0) CHECK(std::abs(ratio - 1.0) < 1e-3);
        prev = std::abs(ratio - 1.0);
    }
}

TEST_CASE("ci combination") {
    CiValue c0 = ci(0.0);
    CHECK(c0.value.real() == doctest::Approx(0.6149266274460007351509).epsilon(1e-13));
    CHECK(c0.value.imag() == doctest::Approx(0.3550280538878172392601).epsilon(1e-13));

    for (double x : {-7.3, -2.0, 0.0, 1.7, 4.0, 9.5}) {
        CiValue c = ci(x);
        AiryPair p = airy(x);
        CHECK(c.value.imag() == p.ai);
        CHECK(c.value.real() == p.bi);
        CHECK(c.derivative.imag() == p.ai_prime);
        CHECK(c.derivative.real() == p.bi_prime);
    }

    CiValue c4 = ci(4.0);
    CHECK(c4.value.real() == doctest::Approx(83.84707140846813992258).epsilon(1e-12));
    CHECK(c4.value.imag() == doctest::Approx(0.0009515638512048018736215).epsilon(1e-12));
    CHECK(c4.derivative.real() == doctest::Approx(161.9266835046134018431).epsilon(1e-12));
    CHECK(c4.derivative.imag() == doctest::Approx(-0.001958640950204178900138).epsilon(1e-12));
}

TEST_CASE("non-finite input rejected") {
    CHECK_THROWS_AS(airy(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(airy(std::numeric_limits<double>::infinity()), std::domain_error);
    CHECK_THROWS_AS(ci(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}
