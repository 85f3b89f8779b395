//! Suffix array with LCP, used to count distinct blocks of every length in
//! one pass. Prefix doubling with counting sorts, then Kasai.

pub struct SuffixIndex {
    sa: Vec<usize>,
    lcp: Vec<usize>,
}

impl SuffixIndex {
    pub fn new(text: &[u8]) -> Self {
        let sa = suffix_array(text);
        let lcp = kasai(text, &sa);
        SuffixIndex { sa, lcp }
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    /// `counts[k]` = number of distinct blocks of length `k`, for
    /// `k = 0..=max_k` (`counts[0] = 1`).
    pub fn distinct_counts(&self, max_k: usize) -> Vec<usize> {
        let n = self.len();
        let max_k = max_k.min(n);
        // at_least[k] = adjacent suffix pairs sharing a length-k prefix
        let mut hist = vec![0usize; max_k + 2];
        for &l in self.lcp.iter().skip(1) {
            hist[l.min(max_k + 1)] += 1;
        }
        let mut at_least = vec![0usize; max_k + 2];
        let mut acc = 0;
        for k in (0..=max_k + 1).rev() {
            acc += hist[k];
            at_least[k] = acc;
        }
        (0..=max_k)
            .map(|k| if k == 0 { 1 } else { (n - k + 1) - at_least[k] })
            .collect()
    }

    pub fn distinct_count(&self, k: usize) -> usize {
        if k > self.len() {
            return 0;
        }
        self.distinct_counts(k)[k]
    }

    /// One start position per distinct length-`k` block, in lexicographic
    /// order of the blocks.
    pub fn representatives(&self, k: usize) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&i| n - self.sa[i] >= k && (i == 0 || self.lcp[i] < k))
            .map(|i| self.sa[i])
            .collect()
    }
}

fn suffix_array(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let mut rank: Vec<usize> = s.iter().map(|&c| c as usize).collect();
    let mut sa: Vec<usize> = (0..n).collect();
    sa.sort_by_key(|&i| rank[i]);
    let mut classes = rank.iter().max().copied().unwrap_or(0) + 1;
    let mut by_second = Vec::with_capacity(n);
    let mut tmp = vec![0usize; n];
    let mut k = 1;
    loop {
        // Order by the second key: suffixes without one come first.
        by_second.clear();
        by_second.extend(n.saturating_sub(k)..n);
        by_second.extend(sa.iter().filter(|&&p| p >= k).map(|&p| p - k));
        // Stable counting sort by the first key.
        let mut cnt = vec![0usize; classes + 1];
        for &p in &by_second {
            cnt[rank[p] + 1] += 1;
        }
        for c in 1..cnt.len() {
            cnt[c] += cnt[c - 1];
        }
        for &p in &by_second {
            sa[cnt[rank[p]]] = p;
            cnt[rank[p]] += 1;
        }
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] as isize } else { -1 });
        tmp[sa[0]] = 0;
        for w in 1..n {
            tmp[sa[w]] = tmp[sa[w - 1]] + (key(sa[w]) != key(sa[w - 1])) as usize;
        }
        classes = tmp[sa[n - 1]] + 1;
        std::mem::swap(&mut rank, &mut tmp);
        if classes == n || k >= n {
            break;
        }
        k *= 2;
    }
    sa
}

fn kasai(s: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0usize; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p] = i;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}
