#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "cpspdc/checksum.hpp"
#include "cpspdc/dispersion.hpp"
#include "cpspdc/error.hpp"
#include "test_support.hpp"

using namespace cpspdc;

namespace {

const char* kMinimalDb = R"({
  "format": "cpspdc-crystals/1",
  "crystals": [
    {
      "name": "TEST",
      "composition": "X",
      "source": "unit test",
      "d_eff_pm_per_v": { "type0": 1.0, "type2": 0.5 },
      "axes": {
        "y": { "form": "sellmeier", "coefficients": [1.5, 0.01], "valid_range_nm": [400, 3000] },
        "z": { "form": "feve", "coefficients": [2.3, 1.1, 0.23, 0.02], "valid_range_nm": [400, 3000] }
      }
    }
  ]
})";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

}  // namespace

// Reference values from an independent 40-digit evaluation of the same
// coefficient sets.
TEST(Dispersion, GoldenIndicesKtp) {
  const auto& db = default_database();
  EXPECT_NEAR(refractive_index(db, "PPKTP", OpticalAxis::Z, 1550.0), 1.8157731108173114, 1e-13);
  EXPECT_NEAR(refractive_index(db, "PPKTP", OpticalAxis::Y, 1550.0), 1.7349061194074448, 1e-13);
  EXPECT_NEAR(refractive_index(db, "PPKTP", OpticalAxis::Z, 775.0), 1.8468323526085753, 1e-13);
  EXPECT_NEAR(refractive_index(db, "PPKTP", OpticalAxis::Y, 775.0), 1.7581310005150027, 1e-13);
}

TEST(Dispersion, GoldenGroupIndices) {
  const auto& db = default_database();
  EXPECT_NEAR(group_index(db, "PPKTP", OpticalAxis::Z, 1550.0), 1.8514984219039396, 1e-12);
  EXPECT_NEAR(group_index(db, "PPKTP", OpticalAxis::Y, 1550.0), 1.7628826146340516, 1e-12);
  EXPECT_NEAR(group_index(db, "PPKTP", OpticalAxis::Z, 775.0), 1.9177597071525547, 1e-12);
  EXPECT_NEAR(group_index(db, "PPRTP", OpticalAxis::Z, 1550.0), 1.8752024461058144, 1e-12);
  EXPECT_NEAR(group_index(db, "PPCTA", OpticalAxis::Y, 800.0), 1.9327940519863414, 1e-12);
}

TEST(Dispersion, FeveFormGolden) {
  const auto& db = default_database();
  EXPECT_NEAR(refractive_index(db, "PPRTP", OpticalAxis::Z, 1550.0), 1.8345620473658765, 1e-13);
  EXPECT_NEAR(refractive_index(db, "PPCTA", OpticalAxis::Y, 800.0), 1.8776943427172965, 1e-13);
}

TEST(Dispersion, WavevectorUnits) {
  const auto& db = default_database();
  const double n = refractive_index(db, "PPKTP", OpticalAxis::Z, 1550.0);
  EXPECT_NEAR(wavevector(db, "PPKTP", OpticalAxis::Z, 1550.0), 2.0 * M_PI * n / 1.55, 1e-12);
}

TEST(Dispersion, AnalyticSlopeMatchesRichardson) {
  const auto& db = default_database();
  for (const auto& [name, rec] : db.records()) {
    for (const auto& [axis, model] : rec.models) {
      const auto& r = model.valid_range();
      for (int k = 1; k < 20; ++k) {
        const double nm = r.min_nm + (r.max_nm - r.min_nm) * k / 20.0;
        const auto f = [&](double x) { return model.index_unchecked(x); };
        const double fd = nm * richardson_derivative(f, nm, 0.5);
        const double ng_fd = model.index(nm) - fd;
        EXPECT_NEAR(model.group_index(nm) / ng_fd, 1.0, 1e-8) << name << '/' << to_string(axis) << " at " << nm;
      }
    }
  }
}

TEST(Dispersion, SellmeierFormAgainstClosedForm) {
  const SellmeierModel m(DispersionForm::Sellmeier, {1.5, 0.01}, {400, 3000});
  const double um = 1.2;
  EXPECT_NEAR(m.index(1200.0), std::sqrt(1.0 + 1.5 * um * um / (um * um - 0.01)), 1e-14);
  const double slope = -1.5 * 2.0 * um * 0.01 / std::pow(um * um - 0.01, 2) / (2.0 * m.index(1200.0)) / 1000.0;
  EXPECT_NEAR(m.index_slope(1200.0), slope, 1e-16);
}

TEST(Dispersion, OutOfRangeThrowsDomainError) {
  const auto& db = default_database();
  EXPECT_THROW(refractive_index(db, "PPKTP", OpticalAxis::Z, 300.0), DomainError);
  EXPECT_THROW(refractive_index(db, "PPKTP", OpticalAxis::Z, 4000.0), DomainError);
  EXPECT_THROW(db.at("PPKTP").model(OpticalAxis::Z).index_slope(430.0), DomainError);
  EXPECT_NO_THROW(db.at("PPKTP").model(OpticalAxis::Z).index(430.0));
}

TEST(Dispersion, UnknownCrystal) {
  const auto& db = default_database();
  EXPECT_THROW(db.at("PPLN"), UnknownCrystalError);
  try {
    db.at("PPLN");
  } catch (const UnknownCrystalError& e) {
    EXPECT_NE(std::string(e.what()).find("PPLN"), std::string::npos);
  }
}

TEST(Dispersion, DefaultDatabaseHasFiveCrystals) {
  const auto& db = default_database();
  EXPECT_EQ(db.size(), 5u);
  for (const char* n : {"PPKTP", "PPRTP", "PPKTA", "PPRTA", "PPCTA"}) EXPECT_TRUE(db.contains(n)) << n;
  EXPECT_EQ(db.checksum(), sha256_hex(read_file(default_database_path())));
  EXPECT_EQ(db.at("PPKTP").d_eff_type0_pm_per_v, 9.5);
  EXPECT_EQ(db.at("PPCTA").d_eff_type2_pm_per_v, 2.1);
}

TEST(Dispersion, ModelArityChecked) {
  EXPECT_THROW(SellmeierModel(DispersionForm::Kato2, {1, 2, 3}, {400, 3000}), ValidationError);
  EXPECT_THROW(SellmeierModel(DispersionForm::Feve, {1, 2, 3, 4, 5}, {400, 3000}), ValidationError);
  EXPECT_THROW(SellmeierModel(DispersionForm::Sellmeier, {1, 2, 3}, {400, 3000}), ValidationError);
  EXPECT_THROW(SellmeierModel(DispersionForm::Feve, {1, 2, 3, 4}, {3000, 400}), ValidationError);
}

TEST(Dispersion, ParseMinimalDatabase) {
  const CrystalDatabase db = parse_database(kMinimalDb);
  ASSERT_TRUE(db.contains("TEST"));
  EXPECT_EQ(db.at("TEST").model(OpticalAxis::Y).form(), DispersionForm::Sellmeier);
  EXPECT_EQ(db.at("TEST").model(OpticalAxis::Z).form(), DispersionForm::Feve);
  EXPECT_EQ(db.checksum(), sha256_hex(kMinimalDb));
}

TEST(Dispersion, SerializeRoundTrip) {
  const CrystalDatabase& db = default_database();
  const CrystalDatabase again = parse_database(serialize_database(db));
  ASSERT_EQ(again.size(), db.size());
  for (const auto& [name, rec] : db.records()) EXPECT_EQ(again.at(name), rec) << name;

  testutil::TempDir dir("db");
  save_database(again, dir / "copy.json");
  const CrystalDatabase loaded = load_database(dir / "copy.json");
  for (const auto& [name, rec] : db.records()) EXPECT_EQ(loaded.at(name), rec) << name;
  EXPECT_EQ(loaded.checksum(), sha256_hex(read_file(dir / "copy.json")));
}

TEST(Dispersion, MissingAxisNamesRecordAndField) {
  const std::string text = replace(kMinimalDb, R"("z": { "form": "feve", "coefficients": [2.3, 1.1, 0.23, 0.02], "valid_range_nm": [400, 3000] })",
                                   R"("x": { "form": "feve", "coefficients": [2.3, 1.1, 0.23, 0.02], "valid_range_nm": [400, 3000] })");
  try {
    parse_database(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("TEST"), std::string::npos) << e.what();
  }
}

TEST(Dispersion, RejectsIndexBelowOne) {
  const std::string text = replace(kMinimalDb, "[2.3, 1.1, 0.23, 0.02]", "[-0.5, 0.1, 0.23, 0.02]");
  try {
    parse_database(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("TEST/z"), std::string::npos) << e.what();
  }
}

TEST(Dispersion, RejectsNegativeDeff) {
  EXPECT_THROW(parse_database(replace(kMinimalDb, R"("type0": 1.0)", R"("type0": -1.0)")), ValidationError);
}

TEST(Dispersion, RejectsDuplicateNames) {
  const CrystalDatabase db = parse_database(kMinimalDb);
  std::vector<CrystalRecord> recs{db.at("TEST"), db.at("TEST")};
  EXPECT_THROW(CrystalDatabase(std::move(recs)), ValidationError);
}

TEST(Dispersion, MalformedJsonIsParseError) {
  EXPECT_THROW(parse_database("{ not json"), ParseError);
  EXPECT_THROW(parse_database(R"({"format": "cpspdc-crystals/1"})"), ParseError);
  EXPECT_THROW(parse_database(replace(kMinimalDb, "cpspdc-crystals/1", "cpspdc-crystals/9")), ParseError);
  EXPECT_THROW(parse_database(replace(kMinimalDb, R"("sellmeier")", R"("cauchy")")), ValidationError);
}

TEST(Dispersion, MissingFileIsIoError) {
  EXPECT_THROW(load_database("/nonexistent/crystals.json"), IoError);
}

TEST(Dispersion, AxisAndFormNames) {
  EXPECT_EQ(parse_axis("y"), OpticalAxis::Y);
  EXPECT_EQ(parse_axis("z"), OpticalAxis::Z);
  EXPECT_THROW(parse_axis("x"), ValidationError);
  for (DispersionForm f : {DispersionForm::Kato2, DispersionForm::Feve, DispersionForm::Sellmeier}) {
    EXPECT_EQ(parse_form(to_string(f)), f);
  }
}

TEST(Dispersion, IndexDecreasesAcrossTelecomBand) {
  const auto& db = default_database();
  for (const auto& [name, rec] : db.records()) {
    for (const auto& [axis, model] : rec.models) {
      double prev = model.index(1100.0);
      for (double nm = 1105.0; nm <= 2100.0; nm += 5.0) {
        const double n = model.index(nm);
        EXPECT_LT(n, prev) << name << '/' << to_string(axis) << " at " << nm;
        prev = n;
      }
    }
  }
}

TEST(Dispersion, MissingZAxisNamesRecordSlash) {
  const std::string text = replace(kMinimalDb, R"(,
        "z": { "form": "feve", "coefficients": [2.3, 1.1, 0.23, 0.02], "valid_range_nm": [400, 3000] })", "");
  try {
    parse_database(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("TEST/z"), std::string::npos) << e.what();
  }
}
