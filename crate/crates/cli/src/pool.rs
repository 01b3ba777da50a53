use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

/// Runs `job(0..count)` on up to `threads` workers. Results come back in
/// index order whatever the completion order; the first error wins.
pub fn run_ordered<R, E, F>(count: usize, threads: usize, job: F) -> Result<Vec<R>, E>
where
    R: Send,
    E: Send,
    F: Fn(usize) -> Result<R, E> + Sync,
{
    let slots: Vec<Mutex<Option<Result<R, E>>>> = (0..count).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = threads.clamp(1, count.max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let out = job(i);
                *slots[i].lock().unwrap() = Some(out);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every slot is filled")).collect()
}

pub fn default_threads(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_by_index() {
        let out: Result<Vec<usize>, ()> = run_ordered(50, 4, |i| {
            // later indices finish first
            std::thread::sleep(std::time::Duration::from_micros((50 - i as u64) * 20));
            Ok(i * i)
        });
        assert_eq!(out.unwrap(), (0..50).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn errors_propagate() {
        let out: Result<Vec<usize>, String> = run_ordered(5, 2, |i| if i == 3 { Err("boom".into()) } else { Ok(i) });
        assert_eq!(out.unwrap_err(), "boom");
    }
}
