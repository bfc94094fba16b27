"""
批量任务：逐项执行检查，支持进度回调、取消与多进程
"""
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Callable, List, Optional, Sequence

from tqdm import tqdm


class TaskCancelled(Exception):
    """ 任务被取消 """


class BatchTask:
    """ 对 items 逐项调用 func，结果按输入顺序返回 """

    def __init__(self, func: Callable, items: Sequence, jobs: int = 1, description: str = '', show_progress: bool = False):
        if jobs < 1:
            raise ValueError(f"jobs 必须至少为 1，得到 {jobs}")
        self.func = func
        self.items = list(items)
        self.jobs = jobs
        self.description = description
        self.show_progress = show_progress
        self.is_cancelled = False
        self.logger = logging.getLogger(__name__)

    def run(self, progress_callback: Optional[Callable[[int], None]] = None) -> List:
        """执行任务；progress_callback 接收 0..100 的进度"""
        total = len(self.items)
        self.logger.info(f"开始批量任务 {self.description or self.func.__name__}: {total} 项, jobs={self.jobs}")
        results: List = [None] * total
        done = 0
        with tqdm(total=total, desc=self.description, disable=not self.show_progress, leave=False) as bar:
            def advance():
                nonlocal done
                done += 1
                bar.update(1)
                if progress_callback:
                    progress_callback(int(done * 100 / total))

            if self.jobs == 1 or total <= 1:
                for i, item in enumerate(self.items):
                    if self.is_cancelled:
                        raise TaskCancelled("任务已取消")
                    results[i] = self.func(item)
                    advance()
            else:
                with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                    futures = {pool.submit(self.func, item): i for i, item in enumerate(self.items)}
                    for future in as_completed(futures):
                        if self.is_cancelled:
                            for f in futures:
                                f.cancel()
                            raise TaskCancelled("任务已取消")
                        results[futures[future]] = future.result()
                        advance()
        self.logger.info(f"批量任务完成: {total} 项")
        return results

    def cancel(self):
        self.is_cancelled = True


def make_runner(jobs: int, description: str = '', show_progress: bool = False) -> Callable[[Callable, Sequence], List]:
    """生成 family_report 等使用的 runner(func, items) 钩子"""
    def runner(func: Callable, items: Sequence) -> List:
        return BatchTask(func, items, jobs, description, show_progress).run()
    return runner
