use koenig_core::curve::{build_lambda, CurveConfig};
use koenig_core::fixtures::by_name;
use koenig_core::pipeline::{analyze_point, AttachmentSpec, LambdaParam, PointSpec};
use koenig_core::scalar::Field;

fn spec_of(name: &str, fxname: &str) -> PointSpec {
    let fx = by_name(fxname).unwrap();
    PointSpec {
        name: name.into(),
        branches: fx.branches,
        generators: fx
            .generators
            .iter()
            .map(|g| g.iter().map(|b| b.iter().map(|&(d, c)| (d, c, 1)).collect()).collect())
            .collect(),
    }
}

fn att(point: &str, branch: usize, component: usize, lambda: LambdaParam) -> AttachmentSpec {
    AttachmentSpec { point: point.into(), branch, component, lambda }
}

fn main() {
    let f = Field::Rational;
    let e6 = analyze_point(f, &spec_of("x1", "E6"), None).unwrap();
    let d7 = analyze_point(f, &spec_of("x2", "D7"), None).unwrap();
    let a5 = analyze_point(f, &spec_of("x3", "A5"), None).unwrap();
    println!("E6: level {} dimQ {} trunc {}", e6.chain.level, e6.dim_q, e6.truncation);
    println!("D7: level {} dimQ {} trunc {} quiver {:?}", d7.chain.level, d7.dim_q, d7.truncation, d7.quiver);
    println!("A5: level {} dimQ {} quiver {:?}", a5.chain.level, a5.dim_q, a5.quiver);
    println!("D7 W layer dims {:?}, conductors {:?}", d7.bimodule.as_ref().unwrap().layer_dims(), d7.bimodule.as_ref().unwrap().conductor_exponents);
    println!("A5 W layer dims {:?}", a5.bimodule.as_ref().unwrap().layer_dims());
    println!("E6 W layer dims {:?}", e6.bimodule.as_ref().unwrap().layer_dims());

    // Paper figure: x1 (E6) on X1; x2 (D7) on X1 ∩ X2; x3 (A5) on X2.
    // Try: D7 line branch (branch 1) on X1, cusp branch (branch 2) on X2.
    let config = CurveConfig::new(
        2,
        vec![e6, d7, a5],
        &[
            att("x1", 1, 1, LambdaParam::Finite(0, 1)),
            att("x2", 1, 1, LambdaParam::Finite(1, 1)),
            att("x2", 2, 2, LambdaParam::Finite(0, 1)),
            att("x3", 1, 2, LambdaParam::Finite(1, 1)),
            att("x3", 2, 2, LambdaParam::Infinity),
        ],
    )
    .unwrap();
    let lambda = build_lambda(&config).unwrap();
    println!("Lambda dim {} = Q {} + E 8 + W {}", lambda.algebra.dim, lambda.dim_q, lambda.dim_w);
    println!("vertices: {:?}", lambda.vertex_labels);
    println!("gl(Q) = {}, gl(Lambda) = {:?}, bound_ok {}", lambda.gl_dim_q, lambda.gl_dim, lambda.gl_bound_ok);
    println!("cartan det {}", lambda.cartan_det);
    let v = &lambda.vertex_labels;
    let iv = |s: &str| v.iter().position(|l| l == s).unwrap();
    let q = &lambda.quiver;
    for (from, to) in [("c1:0", "x1:v1"), ("c1:0", "x2:v1"), ("c2:0", "x2:v1"), ("c2:0", "x3:v1"),
                        ("c1:0", "x1:v2"), ("c1:0", "x2:v2"), ("c2:0", "x2:v2"), ("c2:0", "x3:v2"),
                        ("c1:-1", "x1:v1"), ("c2:-1", "x3:v1")] {
        println!("arrows {from} -> {to}: {}", q[iv(from)][iv(to)]);
    }
}
