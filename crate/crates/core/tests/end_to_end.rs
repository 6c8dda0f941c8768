use featherlink::analysis::bler_campaign;
use featherlink::channel::{ChannelKind, ChannelSpec};
use featherlink::ecc::CodecKind;
use featherlink::link::{
    batch_gradients, batch_loss, build_ae, random_blocks, train, AeShape, AeSystem, Batch, KlPooling, Mode, Objective,
    SavedSystem,
};
use featherlink::nn::relative_error;
use featherlink::rng;
use featherlink::{AeSystem64, ChannelSpec64, TrainConfig64};

fn shapes() -> Vec<AeShape> {
    vec![
        AeShape::new(Mode::OneHot, 3, 6, 2),
        AeShape::new(Mode::BinaryDirect, 4, 8, 3),
        AeShape::coded(CodecKind::Bch14_4, 8, 3).with_hidden_width(12),
    ]
}

fn worst_gradient_error(shape: &AeShape, kind: ChannelKind, objective: &Objective<f64>, seed: u64) -> f64 {
    let mut system: AeSystem64 = build_ae(shape, seed).unwrap();
    let channel = ChannelSpec64::new(kind, 2.0, system.k, system.n, seed).unwrap();
    let mut r = rng::derive(seed, &[42]);
    let blocks = random_blocks(&system, 6, &mut r).unwrap();
    let batch = Batch::draw(&system, blocks, &channel, &mut r);
    let (_, gt, gr) = batch_gradients(&system, &batch, objective).unwrap();
    let mut analytic = gt.flat();
    analytic.extend(gr.flat());
    let params = system.params_flat();
    // A probe that straddles a ReLU kink is off at one step size only, and
    // rounding noise only hurts the smaller one; a wrong gradient fails both.
    (0..params.len())
        .map(|i| {
            [1e-5, 1e-6]
                .into_iter()
                .map(|eps| {
                    let mut probe = params.clone();
                    probe[i] = params[i] + eps;
                    system.set_params_flat(&probe).unwrap();
                    let up = batch_loss(&system, &batch, objective).unwrap().total;
                    probe[i] = params[i] - eps;
                    system.set_params_flat(&probe).unwrap();
                    let down = batch_loss(&system, &batch, objective).unwrap().total;
                    relative_error(analytic[i], (up - down) / (2.0 * eps))
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

#[test]
fn end_to_end_gradients_hold_across_seeds_modes_and_channels() {
    let objectives = [
        Objective::task_only(),
        Objective::with_alpha(0.5),
        Objective { kl_pooling: KlPooling::Batch, ..Objective::with_alpha(0.5) },
    ];
    for shape in shapes() {
        for kind in [ChannelKind::Awgn, ChannelKind::Rayleigh] {
            for obj in &objectives {
                for seed in 0..20 {
                    let e = worst_gradient_error(&shape, kind, obj, seed);
                    assert!(e < 1e-4, "{:?} {kind} {:?} seed {seed}: {e:e}", shape.mode, obj.kl_pooling);
                }
            }
        }
    }
}

fn trained(shape: &AeShape, alpha: f64, epochs: usize, seed: u64) -> AeSystem64 {
    let mut system = build_ae(shape, seed).unwrap();
    let channel = ChannelSpec64::new(ChannelKind::Awgn, 6.0, system.k, system.n, seed).unwrap();
    let config = TrainConfig64 { ebno_train_db: 6.0, alpha, epochs, seed, ..TrainConfig64::default() };
    train(&mut system, &channel, &config).unwrap();
    system
}

#[test]
fn trained_one_hot_link_recovers_every_message_without_noise() {
    let system = trained(&AeShape::new(Mode::OneHot, 4, 8, 2), 0.0, 300, 1);
    for i in 0..16 {
        let x = system.transmit_index(i).unwrap().symbols;
        assert_eq!(system.receive(&x).unwrap().block.index(), i);
    }
    let channel = ChannelSpec64::new(ChannelKind::Awgn, 10.0, 4, 8, 1).unwrap();
    let curve = bler_campaign(&system, &channel, &[10.0], 20_000).unwrap();
    assert!(curve.raw.points[0].bler < 0.05, "{:?}", curve.raw.points[0]);
}

#[test]
fn trained_codewords_are_distinct_and_unit_power() {
    let system = trained(&AeShape::new(Mode::OneHot, 4, 8, 2), 0.1, 100, 2);
    let words: Vec<_> = (0..16).map(|i| system.transmit_index(i).unwrap()).collect();
    for w in &words {
        assert!((w.mean_power() - 1.0).abs() < 1e-12);
    }
    for i in 0..16 {
        for j in i + 1..16 {
            let d: f64 = words[i].symbols.iter().zip(&words[j].symbols).map(|(a, b)| (a - b).norm_sqr()).sum();
            assert!(d > 1e-3, "messages {i} and {j} collide");
        }
    }
}

#[test]
fn coded_link_decodes_through_the_codec_when_noiseless() {
    let shape = AeShape::coded(CodecKind::Bch14_4, 20, 3);
    let system = trained(&shape, 0.0, 200, 3);
    let mut r = rng::derive(3, &[7]);
    let mut wrong = 0;
    for block in random_blocks(&system, 200, &mut r).unwrap() {
        let x = system.transmit(&block).unwrap().symbols;
        let got = system.receive(&x).unwrap().block;
        if system.block_to_source(&got).unwrap() != system.block_to_source(&block).unwrap() {
            wrong += 1;
        }
    }
    assert_eq!(wrong, 0);
}

#[test]
fn batch_pooled_moments_obey_the_power_constraint() {
    let mut system = build_ae(&AeShape::new(Mode::OneHot, 3, 6, 2), 4).unwrap();
    let channel = ChannelSpec64::new(ChannelKind::Awgn, 4.0, 3, 6, 4).unwrap();
    let config = TrainConfig64 {
        alpha: 1.0,
        kl_pooling: KlPooling::Batch,
        epochs: 30,
        train_set_size: 256,
        batch_size: 64,
        seed: 4,
        ..TrainConfig64::default()
    };
    train(&mut system, &channel, &config).unwrap();

    let objective = Objective { kl_pooling: KlPooling::Batch, ..Objective::with_alpha(1.0) };
    let mut r = rng::derive(4, &[9]);
    for _ in 0..10 {
        let blocks = random_blocks(&system, 32, &mut r).unwrap();
        let batch = Batch::draw(&system, blocks, &channel, &mut r);
        let l = batch_loss(&system, &batch, &objective).unwrap();
        assert!((l.pooled_variance + l.pooled_mean * l.pooled_mean - 0.5).abs() < 1e-12, "{l:?}");
    }
}

#[test]
fn saved_system_behaves_identically_after_reload() {
    let system = trained(&AeShape::new(Mode::BinaryDirect, 4, 8, 3), 0.1, 20, 5);
    let channel = ChannelSpec::new(ChannelKind::Rayleigh, 6.0, 4, 8, 5).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    SavedSystem::capture(&system, 0.1, channel, 5).save(&path).unwrap();
    let back: AeSystem64 = SavedSystem::load(&path).unwrap().into_system().unwrap();
    assert_eq!(back.params_flat(), system.params_flat());
    let a =
        bler_campaign(&system, &ChannelSpec64::new(ChannelKind::Rayleigh, 6.0, 4, 8, 5).unwrap(), &[2.0, 6.0], 3000);
    let b = bler_campaign(&back, &ChannelSpec64::new(ChannelKind::Rayleigh, 6.0, 4, 8, 5).unwrap(), &[2.0, 6.0], 3000);
    assert_eq!(a.unwrap(), b.unwrap());
}

#[test]
fn single_precision_system_transmits_unit_power() {
    let system: AeSystem<f32> = build_ae(&AeShape::new(Mode::OneHot, 4, 20, 2), 6).unwrap();
    let wide: AeSystem64 = build_ae(&AeShape::new(Mode::OneHot, 4, 20, 2), 6).unwrap();
    for i in 0..16 {
        let s = system.transmit_index(i).unwrap();
        assert!((s.mean_power() - 1.0).abs() < 1e-5);
        let d = wide.transmit_index(i).unwrap();
        for (a, b) in s.symbols.iter().zip(&d.symbols) {
            assert!((a.re as f64 - b.re).abs() < 1e-4 && (a.im as f64 - b.im).abs() < 1e-4);
        }
    }
}
