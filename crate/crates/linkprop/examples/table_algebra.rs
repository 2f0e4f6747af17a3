//! Dense potential tables: build, multiply, divide, marginalize.
//!
//! Run with `cargo run --example table_algebra`.

use linkprop::{PotentialTable, Scope, Variable};

fn main() -> linkprop::Result<()> {
    let rain = Variable::binary("rain");
    let sprinkler = Variable::binary("sprinkler");
    let grass = Variable::new("grass", 3)?;

    // Layout order does not matter: the scope is canonicalized, sorted
    // by variable id, and values are stored with the last variable of
    // the sorted layout changing fastest.
    let joint = PotentialTable::new(
        vec![rain.clone(), sprinkler.clone(), grass.clone()],
        vec![
            0.30, 0.05, 0.01, // rain=0 sprinkler=0, grass = 0,1,2
            0.10, 0.10, 0.04, // rain=0 sprinkler=1
            0.05, 0.15, 0.05, // rain=1 sprinkler=0
            0.02, 0.06, 0.07, // rain=1 sprinkler=1
        ],
    )?;
    println!("joint over {{grass, rain, sprinkler}}: {} cells", joint.scope().cells());

    let rain_scope = Scope::new([rain.clone()])?;
    let rain_marginal = joint.marginalize(&rain_scope)?;
    println!("P(rain) unnormalized: {:?}", rain_marginal.values());

    let wet = joint.marginalize(&Scope::new([rain.clone(), grass.clone()])?)?;
    let conditional = wet.divide(&rain_marginal)?;
    println!("grass given rain: {:?}", conditional.values());

    // Multiplication broadcasts the smaller table over the union scope.
    let recomposed = conditional.multiply(&rain_marginal)?;
    let diff = recomposed.max_abs_diff(&wet)?;
    println!("recompose joint from chain rule, max deviation: {diff:.2e}");

    let normalized = joint.normalize()?;
    println!(
        "total mass after normalize: {}",
        normalized.values().iter().sum::<f64>()
    );

    // Division treats 0/0 as 0, so sparse supports survive a
    // multiply-then-divide cycle.
    let zeros = PotentialTable::new(vec![rain], vec![0.0, 2.0])?;
    let ratio = zeros.divide(&zeros)?;
    println!("0/0 convention: {:?}", ratio.values());
    Ok(())
}
