#include "tetdisp/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace tetdisp;

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(csv_escape(""), "");
}

TEST(Csv, DoubleRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -2.5e-300, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, ReportLayout) {
  MethodStudy st;
  st.method = parse_method("ML2");
  st.material_label = "elastic(cp/cs=2)";
  st.mesh_label = "tz=0.5";
  DispersionReport r;
  r.method = "ML2";
  r.N_E = 4.0;
  st.rows.push_back(r);
  std::ostringstream os;
  write_reports_csv(os, {st});
  const std::string s = os.str();
  const auto eol = s.find("\r\n");
  ASSERT_NE(eol, std::string::npos);
  std::string header = s.substr(0, eol);
  EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, static_cast<long>(report_columns().size()));
  EXPECT_EQ(header.rfind("method,material,mesh,lambda,N_E", 0), 0u);
  EXPECT_NE(s.find("ML2,elastic(cp/cs=2),tz=0.5,0,4,"), std::string::npos);
}

TEST(Json, FitsAndTables) {
  MethodStudy st;
  st.method = parse_method("DG1a");
  st.fit_disp.alpha_at_order = 1.5;
  st.fit_disp.order = 2;
  const Json j = fits_json({st});
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0]["method"], "DG1a");
  EXPECT_EQ(j[0]["e_disp"]["alpha_at_order"], 1.5);

  ReproducedTable t;
  t.id = "3";
  t.rows.push_back({"ML1", {{"N_E", 17.5, 17.0}, {"e_vec", 0.0, std::nullopt}}});
  const Json tj = table_json(t);
  EXPECT_EQ(tj["rows"][0]["N_E"]["published"], 17.0);
  EXPECT_TRUE(tj["rows"][0]["e_vec"]["published"].is_null());
  std::ostringstream os;
  write_table_csv(os, t);
  EXPECT_EQ(os.str().substr(0, os.str().find("\r\n")), "method,N_E,N_E_published,N_E_rel_dev,e_vec,e_vec_published,e_vec_rel_dev");
  EXPECT_NE(os.str().find("ML1,17.5,17,"), std::string::npos);
}

TEST(Digest, StableAndSensitive) {
  Eigen::VectorXd a(3);
  a << 1.0, 2.0, 3.0;
  const std::string d = eigenvalue_digest(a);
  EXPECT_EQ(d.size(), 16u);
  EXPECT_EQ(d, eigenvalue_digest(a));
  Eigen::VectorXd b = a;
  b[2] += 1e-15;  // below the printed precision
  EXPECT_EQ(d, eigenvalue_digest(b));
  b[2] = 3.001;
  EXPECT_NE(d, eigenvalue_digest(b));
  EXPECT_EQ(kappa_row("ML1", "acoustic", Vec3(1, 0, 0), a, {0.5, 0.0, 1.0}),
            "ML1,acoustic,1,0,0," + d + ",0.5,0");
}

TEST(Json, MeshAndOperators) {
  const Discretization d = discretize(parse_method("ML1"), build_disphenoid_cell(), acoustic(1, 1));
  const Json m = mesh_json(d.mesh);
  EXPECT_EQ(m["tets"].size(), 6u);
  EXPECT_EQ(m["vertices"].size(), 1u);
  const Json o = operators_json(d);
  EXPECT_EQ(o["n0"], 1);
  EXPECT_EQ(o["blocks"].size(), 15u);
  std::ostringstream os;
  write_element_list(os);
  EXPECT_NE(os.str().find("DG3b"), std::string::npos);
  EXPECT_NE(os.str().find("ML3a"), std::string::npos);
}
