use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for one Monte Carlo trial. Results depend only on
/// `(seed, trial)`, not on how trials are scheduled across threads.
pub fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Fresh seed for runs where the user did not supply one.
pub fn entropy_seed() -> u64 {
    rand::random()
}
